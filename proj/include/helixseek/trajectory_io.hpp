#pragma once

// Trajectory CSV (fixed column order, 17 significant digits), auxiliary CSV
// series and the SVG path projection.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "helixseek/averaging.hpp"
#include "helixseek/simulation.hpp"

namespace helixseek {

inline constexpr const char* kTrajectoryHeader =
    "t,px,py,pz,r11,r12,r13,r21,r22,r23,r31,r32,r33,s,zeta1,zeta2,rho,eta,pbx,pby,pbz";

/// Malformed CSV input; line() is 1-based and counts the header.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// "%.17g"
std::string format_double(double x);

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Parses a trajectory CSV. R_bar is not stored in the file and is recomputed
/// from (t, R) with the given swimmer parameters.
Trajectory read_trajectory_csv(std::istream& in, const SwimmerParams& swimmer);
Trajectory read_trajectory_csv(const std::filesystem::path& path, const SwimmerParams& swimmer);

/// t,s,eta
void write_eta_vs_stimulus_csv(const Trajectory& traj, const std::filesystem::path& path);

/// t,angle
void write_alignment_csv(const std::vector<AngleSample>& series, const std::filesystem::path& path);

/// Static figure with the x-y and x-z projections of p(t) side by side.
void write_path_svg(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace helixseek
