#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "optree/common.hpp"
#include "optree/kernel_gp.hpp"
#include "optree/partition.hpp"
#include "optree/soo.hpp"
#include "optree/trace.hpp"

namespace optree {

/// Confidence width schedule B_N = sqrt(2 log(pi^2 N^2 / (6 eta))).
class ConfidenceSchedule {
public:
    /// Throws std::invalid_argument unless 0 < eta < 1.
    explicit ConfidenceSchedule(double eta = 0.05);

    double eta() const noexcept { return eta_; }

    /// Requires N >= 1.
    double width(std::size_t N) const;

private:
    double eta_;
};

double b_n(const ConfidenceSchedule& schedule, std::size_t N);

/// One confidence-bound check at a cell center.
struct GateRecord {
    std::size_t N = 0;
    std::size_t t = 0;  // |D_t| the posterior was conditioned on
    int level = 0;
    CellIndex index;
    Point x;
    double mu = 0.0;
    double sigma = 0.0;
    double b = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    double f_plus = 0.0;  // incumbent at gate time
    bool evaluated = false;
    double g = 0.0;  // value assigned to the node
};

/// CSV header and rows for the gate decision log.
void write_gate_log_csv(std::ostream& os, const std::vector<GateRecord>& log);

/// Mutable run state; a single run owns one.
struct BamsooState {
    BamsooState(std::size_t dim, KernelSpec kernel, ConfidenceSchedule schedule);

    Tree tree;
    GpState gp;
    ConfidenceSchedule schedule;
    double f_plus;
    std::size_t t = 0;  // true evaluations
    std::size_t n = 1;  // expansions
    std::size_t N = 0;  // confidence-bound evaluations

    /// Best true evaluation, for regret reporting. f_plus may also carry LCB values.
    double best_true;
    Point best_true_x;
};

struct GateOutcome {
    double g = 0.0;
    bool evaluated = false;
};

/// Gate hook: receives every decision, plus the evaluated value when the
/// objective was called.
using GateObserver = std::function<void(const GateRecord&)>;

/// Increments N, computes U and L at the cell center from the current
/// posterior, evaluates the objective iff U >= f_plus (extending the GP),
/// otherwise assigns g = L. Finally f_plus = max(f_plus, g).
GateOutcome evaluate_or_bound(BamsooState& state, const Objective& objective, const Cell& cell,
                              const GateObserver& on_gate = {});

struct BamsooOptions {
    ExpansionObserver on_expand;
    GateObserver on_gate;
    std::vector<GateRecord>* gate_log = nullptr;
    Tree* final_tree = nullptr;
    /// The run also stops once this many confidence bounds were computed,
    /// which caps tree growth when the gate keeps rejecting.
    std::size_t max_bound_checks = 50000;
};

/// BaMSOO on [0,1]^dim. Before the root, one uniform point drawn from `seed`
/// is evaluated and added to the GP data and f_plus but not to the tree.
/// The budget counts true objective evaluations, including that point.
RunTrace bamsoo_run(const Objective& objective, const SooConfig& config,
                    const ConfidenceSchedule& schedule, const KernelSpec& kernel,
                    std::uint64_t seed, const BamsooOptions& options = {});

}  // namespace optree
