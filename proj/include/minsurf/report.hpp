#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "minsurf/core.hpp"

namespace minsurf {

/// One named verification. `measured` is the residual or worst violation of
/// the statement being checked, so pass <=> measured <= tolerance always.
/// `anchor` is the stable identifier of the verified statement, shared
/// between suites and the aggregated report.
struct CheckReport {
    std::string id;
    std::string anchor;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;                 // console diagnostics only
    std::map<std::string, double> details;   // named side values

    static CheckReport make(std::string id, std::string anchor, double measured,
                            double tolerance) {
        CheckReport r;
        r.id = std::move(id);
        r.anchor = std::move(anchor);
        r.measured = measured;
        r.tolerance = tolerance;
        r.pass = measured <= tolerance;
        return r;
    }
};

inline bool all_pass(const std::vector<CheckReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

}  // namespace minsurf
