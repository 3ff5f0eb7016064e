#pragma once

// Per-estimate verification record.  The JSON layout is a committed interface:
// {name, passed, empiricalConstant, witnesses: [{x, y, value}], gridParams, notes[]}.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace macert {

// Deterministic short formatting for report notes.
inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Witness {
    double x = 0.0;
    double y = 0.0;  // 0 for one-dimensional checks
    double value = 0.0;
};

struct GridParams {
    long long n = 0;        // 1D sample count (0 when unused)
    long long nx = 0;       // 2D grid sizes (0 when unused)
    long long ny = 0;
    double abs_tol = 1e-8;
    double rel_tol = 1e-6;
};

struct CertReport {
    std::string name;
    bool passed = true;
    double empirical_constant = 0.0;
    std::vector<Witness> witnesses;
    GridParams grid_params;
    std::vector<std::string> notes;

    void fail(Witness w, const std::string& note = "") {
        passed = false;
        witnesses.push_back(w);
        if (!note.empty()) notes.push_back(note);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

inline nlohmann::ordered_json to_json(const CertReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["empiricalConstant"] = r.empirical_constant;
    auto wits = nlohmann::ordered_json::array();
    for (const auto& w : r.witnesses)
        wits.push_back({{"x", w.x}, {"y", w.y}, {"value", w.value}});
    j["witnesses"] = wits;
    nlohmann::ordered_json gp;
    gp["n"] = r.grid_params.n;
    gp["nx"] = r.grid_params.nx;
    gp["ny"] = r.grid_params.ny;
    gp["absTol"] = r.grid_params.abs_tol;
    gp["relTol"] = r.grid_params.rel_tol;
    j["gridParams"] = gp;
    j["notes"] = r.notes;
    return j;
}

}  // namespace macert
