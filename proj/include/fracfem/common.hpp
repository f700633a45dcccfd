#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfem {

// Coordinates are stored with the third component unused (zero) for dim == 2.
using Vec3 = std::array<double, 3>;

enum class ErrorCode {
  InvalidArgument,
  Io,
  Parse,
  Mesh,
  Trace,
  Solver,
  Internal,
};

/// Exception carrying a stable error category for the C boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline double distance(const Vec3& a, const Vec3& b) { return norm(sub(a, b)); }

// Tolerances shared across modules (see the module contracts).
inline constexpr double kVolumeEps = 1e-12;  // degeneracy, relative to edge scale
inline constexpr double kFaceEps = 1e-12;    // barycentric zero classification

}  // namespace fracfem
