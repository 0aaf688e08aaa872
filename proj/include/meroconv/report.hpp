#pragma once

#include <string>

#include "meroconv/classify.hpp"
#include "meroconv/dynamics.hpp"
#include "meroconv/geometry.hpp"

// vendored single-header json exposes nlohmann::ordered_json
#include <json.hpp>

namespace mero {

using Json = nlohmann::ordered_json;

/// CLI run configuration, echoed verbatim into every report.
struct RunConfig {
    int k_min = 1;
    int k_max = 0;           // 0: use the registry default
    double tol = 1e-8;
    std::uint64_t seed = 20240901;
    std::int64_t budget = 0; // 0: default budget
    double eps = 0.0;
    int chart = 0;
    std::string grid = "200x200";
    std::string out_path;    // empty: stdout
    std::string format = "json";
    int workers = 2;
    int d = 2;
    int order = 0;
    int k = 3;
    double radius = 0.5;
};

Json to_json(const RunConfig& c);
Json to_json(const MassReport& m);
Json to_json(const AreaReport& a);
Json to_json(const CountReport& c);
Json to_json(const KingReport& k);
Json to_json(const RashkovskiiReport& r);
Json to_json(const Verdict& v);
Json to_json(const SeparationReport& s);
Json to_json(const BubbleReport& b);
Json to_json(const GammaVolumeSeries& g);

/// Top-level report wrapper: schema version, command, config echo, results.
Json make_report(const std::string& command, const RunConfig& cfg, Json results);

}  // namespace mero
