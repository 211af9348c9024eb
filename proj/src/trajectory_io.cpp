#include "helixseek/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace helixseek {

namespace {

constexpr std::size_t kColumns = 21;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << kTrajectoryHeader << '\n';
  std::string line;
  for (const auto& row : traj) {
    line.clear();
    auto put = [&](double v) {
      if (!line.empty()) line.push_back(',');
      line += format_double(v);
    };
    put(row.t);
    put(row.pose.p.x);
    put(row.pose.p.y);
    put(row.pose.p.z);
    for (double v : row.pose.R.m) put(v);
    put(row.s);
    put(row.filter.zeta1);
    put(row.filter.zeta2);
    put(row.filter.rho);
    put(row.eta);
    put(row.avg.p_bar.x);
    put(row.avg.p_bar.y);
    put(row.avg.p_bar.z);
    out << line << '\n';
  }
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_trajectory_csv(traj, out);
}

Trajectory read_trajectory_csv(std::istream& in, const SwimmerParams& swimmer) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw CsvError(1, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryHeader) throw CsvError(1, "unexpected header");

  Trajectory traj;
  std::array<double, kColumns> v{};
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t col = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      if (col >= kColumns) throw CsvError(line_no, "too many columns");
      const std::string field = line.substr(pos, comma - pos);
      char* end = nullptr;
      errno = 0;
      v[col] = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
        throw CsvError(line_no, "column " + std::to_string(col + 1) + " is not a number");
      }
      ++col;
      pos = comma + 1;
    }
    if (col != kColumns) {
      throw CsvError(line_no, "expected " + std::to_string(kColumns) + " columns, got " +
                                  std::to_string(col));
    }
    TrajectoryRow row;
    row.t = v[0];
    row.pose.p = {v[1], v[2], v[3]};
    std::copy(v.begin() + 4, v.begin() + 13, row.pose.R.m.begin());
    row.s = v[13];
    row.filter = {v[14], v[15], v[16]};
    row.eta = v[17];
    row.avg = averaged_frame(row.pose, row.t, swimmer);
    row.avg.p_bar = {v[18], v[19], v[20]};
    if (!traj.empty() && !(row.t > traj.back().t)) {
      throw CsvError(line_no, "time is not strictly increasing");
    }
    traj.push_back(row);
  }
  if (traj.empty()) throw CsvError(line_no, "no data rows");
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, const SwimmerParams& swimmer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError(0, "cannot read " + path.string());
  return read_trajectory_csv(in, swimmer);
}

void write_eta_vs_stimulus_csv(const Trajectory& traj, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,s,eta\n";
  for (const auto& row : traj) {
    out << format_double(row.t) << ',' << format_double(row.s) << ',' << format_double(row.eta)
        << '\n';
  }
}

void write_alignment_csv(const std::vector<AngleSample>& series,
                         const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,angle\n";
  for (const auto& a : series) out << format_double(a.t) << ',' << format_double(a.angle) << '\n';
}

void write_path_svg(const Trajectory& traj, const std::filesystem::path& path) {
  constexpr double kPanel = 400.0;
  constexpr double kPad = 20.0;
  const std::size_t stride = std::max<std::size_t>(1, traj.size() / 4000);

  auto panel = [&](auto&& horizontal, auto&& vertical, double x_offset, const char* label) {
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    double vmin = hmin, vmax = -hmin;
    for (const auto& row : traj) {
      hmin = std::min(hmin, horizontal(row));
      hmax = std::max(hmax, horizontal(row));
      vmin = std::min(vmin, vertical(row));
      vmax = std::max(vmax, vertical(row));
    }
    const double span = std::max({hmax - hmin, vmax - vmin, 1e-12});
    const double scale = (kPanel - 2.0 * kPad) / span;
    std::ostringstream s;
    s << "  <g>\n    <rect x=\"" << x_offset << "\" y=\"0\" width=\"" << kPanel << "\" height=\""
      << kPanel << "\" fill=\"white\" stroke=\"#888\"/>\n";
    s << "    <text x=\"" << x_offset + kPad << "\" y=\"" << kPad - 5
      << "\" font-size=\"12\" font-family=\"sans-serif\">" << label << "</text>\n";
    s << "    <polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"0.8\" points=\"";
    for (std::size_t i = 0; i < traj.size(); i += stride) {
      const double x = x_offset + kPad + (horizontal(traj[i]) - hmin) * scale;
      const double y = kPanel - kPad - (vertical(traj[i]) - vmin) * scale;
      s << format_double(x) << ',' << format_double(y) << ' ';
    }
    s << "\"/>\n  </g>\n";
    return s.str();
  };

  auto px = [](const TrajectoryRow& r) { return r.pose.p.x; };
  auto py = [](const TrajectoryRow& r) { return r.pose.p.y; };
  auto pz = [](const TrajectoryRow& r) { return r.pose.p.z; };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kPanel << "\" height=\""
      << kPanel << "\" viewBox=\"0 0 " << 2 * kPanel << ' ' << kPanel << "\">\n";
  out << panel(px, py, 0.0, "x-y");
  out << panel(px, pz, kPanel, "x-z");
  out << "</svg>\n";
}

}  // namespace helixseek
