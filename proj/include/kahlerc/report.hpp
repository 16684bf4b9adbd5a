#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahlerc/numeric.hpp"

// Check records shared by model validation and the suite runner. A record is
// one measured defect against one pinned tolerance; "op" distinguishes the
// usual upper bounds from witness checks that must exceed a threshold.

namespace kahlerc {

struct CheckRecord {
    std::string name;
    std::string anchor;   // the identity being checked, in formula form
    real defect = 0;
    real tolerance = 0;
    bool at_least = false;  // true: pass iff defect >= tolerance
    bool pass = false;
    double wall_ms = 0;

    static CheckRecord at_most(std::string name, std::string anchor, real defect, real tol) {
        CheckRecord r;
        r.name = std::move(name);
        r.anchor = std::move(anchor);
        r.defect = defect;
        r.tolerance = tol;
        r.at_least = false;
        r.pass = defect <= tol;
        return r;
    }

    static CheckRecord witness(std::string name, std::string anchor, real defect, real tol) {
        CheckRecord r;
        r.name = std::move(name);
        r.anchor = std::move(anchor);
        r.defect = defect;
        r.tolerance = tol;
        r.at_least = true;
        r.pass = defect >= tol;
        return r;
    }
};

struct ValidationReport {
    std::vector<CheckRecord> records;

    bool pass() const {
        return std::all_of(records.begin(), records.end(),
                           [](const CheckRecord& r) { return r.pass; });
    }

    void add(CheckRecord r) { records.push_back(std::move(r)); }

    void sort_by_name() {
        std::stable_sort(records.begin(), records.end(),
                         [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    }

    const CheckRecord* find(const std::string& name) const {
        for (const auto& r : records)
            if (r.name == name) return &r;
        return nullptr;
    }
};

inline nlohmann::json to_json(const CheckRecord& r, bool with_time = true) {
    nlohmann::json j{{"name", r.name},
                     {"anchor", r.anchor},
                     {"defect", static_cast<double>(r.defect)},
                     {"tolerance", static_cast<double>(r.tolerance)},
                     {"op", r.at_least ? ">=" : "<="},
                     {"pass", r.pass}};
    if (with_time) j["wall_ms"] = r.wall_ms;
    return j;
}

inline nlohmann::json to_json(const ValidationReport& rep, bool with_time = true) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : rep.records) records.push_back(to_json(r, with_time));
    return nlohmann::json{{"records", records}, {"pass", rep.pass()}};
}

inline nlohmann::json complex_json(const cplx& c) {
    return nlohmann::json::array(
        {static_cast<double>(c.real()), static_cast<double>(c.imag())});
}

}  // namespace kahlerc
