#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optree/benchmarks.hpp"
#include "optree/gpucb.hpp"
#include "optree/kernel_gp.hpp"
#include "optree/trace.hpp"

namespace optree {

enum class Algorithm { Soo, Bamsoo, Gpucb };

std::string to_string(Algorithm algorithm);

/// "soo", "bamsoo" or "gpucb"; throws std::invalid_argument otherwise.
Algorithm algorithm_from_string(const std::string& name);

/// Comma-separated list, e.g. "soo,bamsoo". Rejects empty lists and duplicates.
std::vector<Algorithm> parse_algorithm_list(const std::string& list);

std::string join_algorithms(const std::vector<Algorithm>& algorithms);

/// Kernel used for a benchmark when the experiment does not set one.
KernelSpec default_kernel(const std::string& benchmark);

struct ExperimentSpec {
    std::string benchmark = "branin";
    std::vector<Algorithm> algorithms{Algorithm::Soo, Algorithm::Bamsoo, Algorithm::Gpucb};
    std::size_t repeats = 50;
    std::size_t budget = 150;
    double eta = 0.05;
    double hmax_epsilon = 0.5;
    std::optional<KernelSpec> kernel;  // unset: default_kernel(benchmark)
    std::uint64_t base_seed = 0;
    AuxConfig aux;
    std::size_t max_bound_checks = 50000;
    std::size_t jobs = 1;

    /// Throws std::invalid_argument on any out-of-range field.
    void validate() const;
    KernelSpec resolved_kernel() const;

    bool operator==(const ExperimentSpec& other) const;
};

struct RunResult {
    Algorithm algorithm = Algorithm::Soo;
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    RunTrace trace;
    double wall_s = 0.0;  // around the optimizer call only
};

/// Per-run log10 regret at evaluation indices 1..budget.
struct RunCurve {
    Algorithm algorithm = Algorithm::Soo;
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::vector<double> log_regret;
    double wall_s = 0.0;
};

struct AlgorithmCurve {
    Algorithm algorithm = Algorithm::Soo;
    std::size_t runs = 0;
    std::vector<double> mean;
    std::vector<double> std;  // population standard deviation
    std::vector<double> median;
    std::vector<double> min;
    std::vector<double> max;
    double total_wall_s = 0.0;
    double mean_wall_s = 0.0;

    double final_median() const { return median.back(); }
};

struct CurveSummary {
    std::string benchmark;
    std::size_t budget = 0;
    std::vector<AlgorithmCurve> curves;

    const AlgorithmCurve& at(Algorithm algorithm) const;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<RunResult> runs;
    CurveSummary summary;
};

/// Thrown when one (algorithm, seed) cell fails; wraps the original message.
class RunError : public std::runtime_error {
public:
    RunError(Algorithm algorithm, std::uint64_t seed, const std::string& what);

    Algorithm algorithm() const noexcept { return algorithm_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    Algorithm algorithm_;
    std::uint64_t seed_;
};

/// Runs one optimizer once. Traces may exceed the budget by one (SOO and
/// BaMSOO finish the expansion in progress); the harness truncates.
RunTrace run_single(Algorithm algorithm, const Benchmark& bench, const ExperimentSpec& spec,
                    std::uint64_t seed);

/// SOO runs once with base_seed; the others run with base_seed + i for
/// i < repeats. Cells run on up to spec.jobs threads; results do not depend
/// on scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Best-so-far log10 regret carried forward to length `budget`; records past
/// the budget are ignored.
RunCurve regret_curve(const RunResult& run, const Benchmark& bench, std::size_t budget);

CurveSummary summarize(const std::string& benchmark, std::size_t budget,
                       const std::vector<Algorithm>& algorithms,
                       const std::vector<RunCurve>& curves);

// ---- CSV ----

/// run_id, algorithm, seed, t, n, N, x_0..x_{D-1}, f, f_plus, log_regret, wall_s.
/// Only the first `budget` records of each run are written.
void write_raw_csv(std::ostream& os, const ExperimentResult& result);

/// eval_index, then <algo>_mean, <algo>_std, <algo>_median per algorithm.
void write_summary_csv(std::ostream& os, const CurveSummary& summary);

struct RawRow {
    std::size_t run_id = 0;
    Algorithm algorithm = Algorithm::Soo;
    std::uint64_t seed = 0;
    std::size_t t = 0, n = 0, N = 0;
    Point x;
    double f = 0.0, f_plus = 0.0, log_regret = 0.0, wall_s = 0.0;
};

/// Throws std::runtime_error with the line number on malformed input.
std::vector<RawRow> read_raw_csv(std::istream& is);

/// Rebuilds per-run curves from raw rows (carrying the last value forward).
std::vector<RunCurve> curves_from_raw(const std::vector<RawRow>& rows, std::size_t budget);

// ---- timing ----

struct TimingEntry {
    Algorithm algorithm = Algorithm::Soo;
    std::size_t runs = 0;
    double total_s = 0.0;
    double per_run_s = 0.0;
};

struct TimingReport {
    std::vector<TimingEntry> entries;  // SOO, BaMSOO, GP-UCB
    bool checked = false;  // see timing_report
    bool ordered = false;  // per-run time SOO < BaMSOO < GP-UCB

    std::string text() const;
};

inline constexpr std::size_t kMinTimingBudget = 10;

/// Entries for whichever algorithms ran; the ordering is only checked when
/// all three ran with at least kMinTimingBudget evaluations.
TimingReport timing_report(const ExperimentResult& result);

/// Requires all three algorithms in the result's spec.
TimingReport timing_compare(const ExperimentResult& result);
TimingReport timing_compare(const ExperimentSpec& spec);

}  // namespace optree
