#pragma once

#include <cstdint>
#include <vector>

#include "defectlab/report.hpp"

namespace defectlab::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 20260810;

struct Options {
  std::uint64_t seed = kDefaultSeed;
};

/// The ten verification criteria, each as a self-contained report with its
/// tolerances pinned in code. run_all executes them in order.
report::Report criterion_1_kv_identity();
report::Report criterion_2_nicholson();
report::Report criterion_3_mellin();
report::Report criterion_4_index_count();
report::Report criterion_5_radial_residuals();
report::Report criterion_6_parseval();
report::Report criterion_7_flow_simulator();
report::Report criterion_8_local_exponentiation(const Options& opt);
report::Report criterion_9_indices_1d();
report::Report criterion_10_resolvent_commutation();

std::vector<report::Report> run_all(const Options& opt = {});

}  // namespace defectlab::acceptance
