#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgcn/graph.hpp"

namespace sgcn {

/// Outcome of one mechanical check. pass holds exactly when max_deviation <
/// tolerance; structural failures (wrong number of value classes, a missing
/// class in some cycle, ...) report an infinite deviation.
struct LemmaReport {
    std::string lemma;
    std::string parameters;
    double max_deviation = 0;
    double tolerance = 0;
    bool pass = false;
    /// Representative computed values (lemma-specific, see each verify_*).
    std::vector<double> witness;
    std::optional<NodeId> first_violation_node;
    double first_violation_value = 0;
    std::string note;
};

/// C_{2n} with the alternating signal (a, b, a, b, ...). Checks that every
/// GCN-filter cascade of depth 1..cascade_depth is the constant predicted by
/// theory and that every Psi_0 cascade alternates between exactly two values.
/// witness = {GCN response, Psi_0 value on even nodes, Psi_0 value on odd nodes}.
/// Throws std::invalid_argument for n < 2, a == b or cascade_depth == 0.
LemmaReport verify_even_cycle(std::size_t n, double a, double b, double theta, std::size_t cascade_depth,
                              double tolerance = 1e-12);

/// The same checks on a beta-regular bipartite graph with the 2-coloring signal
/// (a on one part, b on the other), plus Psi_0 x == x - (a + b)/2 exactly.
LemmaReport verify_bipartite(std::size_t part_size, std::size_t beta, double a, double b, double theta,
                             std::size_t cascade_depth, double tolerance = 1e-12);

/// Chained cycles: the GCN response to c * 1 takes exactly the three hub/pass
/// values c*theta*{1 + 1/3 + 2/sqrt(6), 2, 1 + 1/sqrt(6) + 1/2}, and every
/// cycle contains all three. witness = the three analytic values.
/// Admissible lengths: at least two cycles, end cycles >= 4, interior >= 7;
/// anything else throws std::invalid_argument. c * theta == 0 is degenerate
/// and reported as a failure.
LemmaReport verify_hub_pass(std::span<const std::size_t> lengths, double c, double theta, double tolerance = 1e-9);

/// Psi_3 * 1 on the chained (6, 8) cycles against the 14-value reference
/// table; also checks that Psi_3 separates the two cycles while the GCN
/// response does not. witness = the 14 computed values.
LemmaReport verify_psi3_table(double tolerance = 5e-4);

/// The reference Psi_3 * 1 table (node order v1..v14).
std::span<const double> psi3_reference();

struct SweepOptions {
    std::uint64_t seed = 0;
    /// Overrides every check's default tolerance when set.
    std::optional<double> tolerance;
    /// Restricts the hub/pass sweep to one length vector; (6, 8) also runs the
    /// table check. Empty means the default panel of six.
    std::vector<std::size_t> lengths;
};

/// Even cycles over n = 2..8 with five random (a, b, theta), bipartite graphs over
/// beta = 2..5 and part sizes beta..8, hub/pass over six length vectors and
/// the table check. Deterministic given the seed.
std::vector<LemmaReport> run_lemma_sweep(const SweepOptions& options = {});

} // namespace sgcn
