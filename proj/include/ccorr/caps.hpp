#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccorr {

/// Size limits for exact enumeration. Operations refuse inputs above a cap
/// instead of falling back to sampling.
struct Caps {
  int max_edges = 20;             // dense edge tables hold 2^|E| entries
  int max_joint_bits = 24;        // |E| + |V| log2|colors| for joint tables
  int max_pa_vertices = 4;        // full up-set pair checks; 5 is allowed explicitly
  int max_upset_coordinates = 5;  // hard limit for up-set enumeration
  int max_spin_bits = 24;         // |V| log2|colors| for spin tables

  /// Defaults overridden by CCORR_MAX_EDGES and CCORR_MAX_PA_VERTICES.
  static Caps from_environment() {
    Caps caps;
    if (const char* v = std::getenv("CCORR_MAX_EDGES")) caps.max_edges = std::atoi(v);
    if (const char* v = std::getenv("CCORR_MAX_PA_VERTICES")) caps.max_pa_vertices = std::atoi(v);
    return caps;
  }
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string cap, long actual, long limit)
      : std::runtime_error("refused: " + cap + " = " + std::to_string(actual) + " exceeds cap " +
                           std::to_string(limit)),
        cap_(std::move(cap)),
        actual_(actual),
        limit_(limit) {}

  const std::string& cap() const noexcept { return cap_; }
  long actual() const noexcept { return actual_; }
  long limit() const noexcept { return limit_; }

 private:
  std::string cap_;
  long actual_;
  long limit_;
};

inline void enforce_cap(std::string_view cap, long actual, long limit) {
  if (actual > limit) throw CapExceeded(std::string(cap), actual, limit);
}

}  // namespace ccorr
