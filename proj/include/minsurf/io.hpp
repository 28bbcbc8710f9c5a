#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minsurf/core.hpp"
#include "minsurf/foliation.hpp"
#include "minsurf/profile.hpp"
#include "minsurf/report.hpp"

namespace minsurf {

using ordered_json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; deterministic across runs.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::config_error, "cannot open output file " + path.string());
    out << text;
}

/// Profile CSV with exactly the columns t,f,p.
inline void write_profile_csv(const std::filesystem::path& path, const RadialProfile& prof,
                              int samples = 0) {
    std::string text = "t,f,p\n";
    if (samples <= 0) {
        for (const auto& s : prof.samples)
            text += format_double(s.t) + "," + format_double(s.f) + "," + format_double(s.p) +
                    "\n";
    } else {
        for (int i = 0; i < samples; ++i) {
            double t = prof.t_min() + (prof.t_max() - prof.t_min()) * i / (samples - 1.0);
            ProfileState s = prof.at(t);
            text += format_double(s.t) + "," + format_double(s.f) + "," + format_double(s.p) +
                    "\n";
        }
    }
    write_text(path, text);
}

inline ordered_json check_to_json(const CheckReport& rep) {
    ordered_json j;
    j["id"] = rep.id;
    j["anchor"] = rep.anchor;
    j["measured"] = rep.measured;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    if (!rep.details.empty()) {
        ordered_json d;
        for (const auto& [k, v] : rep.details) d[k] = v;
        j["details"] = d;
    }
    return j;
}

inline void write_checks_json(const std::filesystem::path& path, const std::string& command,
                              const std::vector<CheckReport>& checks) {
    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["checks"] = ordered_json::array();
    for (const auto& rep : checks) j["checks"].push_back(check_to_json(rep));
    write_text(path, j.dump(2) + "\n");
}

/// Plot data: one whitespace-separated two-column block per leaf (full
/// cross-section, mirrored in t), ascending z, then a parametric horizon
/// block. Blocks are separated by blank lines.
inline void write_foliation_plotdata(const std::filesystem::path& path,
                                     const std::vector<Leaf>& leaves, double horizon_radius) {
    std::string text;
    for (const Leaf& leaf : leaves) {
        text += "# leaf z=" + format_double(leaf.z) + "\n";
        for (size_t i = leaf.view_t.size(); i-- > 0;)
            text += format_double(-leaf.view_t[i]) + " " + format_double(leaf.view_f[i]) + "\n";
        for (size_t i = 0; i < leaf.view_t.size(); ++i)
            text += format_double(leaf.view_t[i]) + " " + format_double(leaf.view_f[i]) + "\n";
        text += "\n";
    }
    if (horizon_radius > 0.0) {
        text += "# horizon circle\n";
        const int m = 256;
        for (int i = 0; i <= m; ++i) {
            double th = 2.0 * M_PI * i / m;
            text += format_double(horizon_radius * std::cos(th)) + " " +
                    format_double(horizon_radius * std::sin(th)) + "\n";
        }
        text += "\n";
    }
    write_text(path, text);
}

inline void write_plotdata_readme(const std::filesystem::path& path) {
    write_text(path,
               "Foliation plot data\n"
               "===================\n"
               "Whitespace-separated two-column blocks, blank-line separated.\n"
               "Column 1: signed horizontal radius in the symmetry plane.\n"
               "Column 2: height above the equatorial plane.\n"
               "Leaf blocks come first in ascending boundary height z; the\n"
               "final block is the horizon circle sampled parametrically.\n"
               "Any block-aware plotting tool (for example gnuplot's\n"
               "  plot 'foliation_plotdata.dat' with lines\n"
               ") renders the cross-section of the foliation.\n");
}

}  // namespace minsurf
