#include "optree/trace.hpp"

#include <sstream>

namespace optree {

std::string trace_fingerprint(const RunTrace& trace) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& r : trace.records) {
        os << r.t << ' ' << r.n << ' ' << r.N << ' ' << format_point(r.x) << ' ' << r.f << ' '
           << r.best_so_far << '\n';
    }
    os << "best " << format_point(trace.best_x) << ' ' << trace.best_f << '\n';
    os << "expansions " << trace.expansions << " nodes " << trace.tree_nodes << " bounds "
       << trace.bound_checks << '\n';
    return os.str();
}

}  // namespace optree
