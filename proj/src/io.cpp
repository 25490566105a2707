#include "ldrw/io.hpp"

#include <fstream>
#include <stdexcept>

namespace ldrw {

namespace {

using nlohmann::json;

json point_to_json(const LatticePoint& p) {
    json a = json::array();
    for (auto c : p) a.push_back(c);
    return a;
}

LatticePoint point_from_json(const json& j, int dim) {
    if (!j.is_array() || int(j.size()) != dim)
        throw std::invalid_argument("json: lattice point must be an array of length dim");
    LatticePoint p;
    p.reserve(j.size());
    for (const auto& c : j) {
        if (!c.is_number_integer()) throw std::invalid_argument("json: coordinates must be integers");
        p.push_back(c.get<std::int64_t>());
    }
    return p;
}

int dim_from_json(const json& j) {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw std::invalid_argument("json: missing integer field 'dim'");
    int dim = j["dim"].get<int>();
    if (dim < 1) throw std::invalid_argument("json: dim must be >= 1");
    return dim;
}

json weighted_points_to_json(const std::map<LatticePoint, double>& entries) {
    json a = json::array();
    for (const auto& [x, w] : entries) a.push_back(json::array({point_to_json(x), w}));
    return a;
}

std::map<LatticePoint, double> weighted_points_from_json(const json& j, int dim,
                                                         const char* field) {
    if (!j.is_array()) throw std::invalid_argument(std::string("json: '") + field + "' must be an array");
    std::map<LatticePoint, double> out;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2)
            throw std::invalid_argument(std::string("json: '") + field + "' items must be [point, value]");
        LatticePoint p = point_from_json(item[0], dim);
        if (!item[1].is_number())
            throw std::invalid_argument(std::string("json: '") + field + "' values must be numbers");
        if (!out.emplace(p, item[1].get<double>()).second)
            throw std::invalid_argument(std::string("json: duplicate point in '") + field + "'");
    }
    return out;
}

}  // namespace

nlohmann::json to_json(const SparseMeasure& mu) {
    return json{{"dim", mu.dim()}, {"entries", weighted_points_to_json(mu.entries())}};
}

SparseMeasure measure_from_json(const nlohmann::json& j) {
    int dim = dim_from_json(j);
    if (!j.contains("entries")) throw std::invalid_argument("json: measure needs 'entries'");
    return SparseMeasure(dim, weighted_points_from_json(j["entries"], dim, "entries"));
}

nlohmann::json to_json(const CompactPoint& xi) {
    json orbits = json::array();
    for (const auto& o : xi.orbits()) orbits.push_back(to_json(o.representative()));
    return json{{"dim", xi.dim()}, {"orbits", orbits}};
}

CompactPoint compact_point_from_json(const nlohmann::json& j) {
    int dim = dim_from_json(j);
    if (!j.contains("orbits") || !j["orbits"].is_array())
        throw std::invalid_argument("json: compact point needs an 'orbits' array");
    std::vector<Orbit> orbits;
    for (const auto& m : j["orbits"]) orbits.emplace_back(measure_from_json(m));
    return CompactPoint(dim, std::move(orbits));
}

nlohmann::json to_json(const RateKernel& kernel) {
    return json{{"dim", kernel.dim()}, {"jumps", weighted_points_to_json(kernel.jumps())}};
}

RateKernel kernel_from_json(const nlohmann::json& j) {
    int dim = dim_from_json(j);
    if (!j.contains("jumps")) throw std::invalid_argument("json: kernel needs 'jumps'");
    return RateKernel(dim, weighted_points_from_json(j["jumps"], dim, "jumps"));
}

nlohmann::json to_json(const DifferencePotential& v) {
    json values = json::array();
    for (const auto& [z, val] : v.values()) values.push_back(json::array({point_to_json(z), val}));
    return json{{"dim", v.dim()}, {"values", values}};
}

DifferencePotential potential_from_json(const nlohmann::json& j) {
    int dim = dim_from_json(j);
    if (!j.contains("values")) throw std::invalid_argument("json: potential needs 'values'");
    return DifferencePotential(dim, weighted_points_from_json(j["values"], dim, "values"));
}

nlohmann::json site_function_to_json(int dim, const SiteFunction& f) {
    json values = json::array();
    for (const auto& [x, val] : f) values.push_back(json::array({point_to_json(x), val}));
    return json{{"dim", dim}, {"values", values}};
}

std::pair<int, SiteFunction> site_function_from_json(const nlohmann::json& j) {
    int dim = dim_from_json(j);
    if (!j.contains("values")) throw std::invalid_argument("json: site function needs 'values'");
    return {dim, weighted_points_from_json(j["values"], dim, "values")};
}

nlohmann::json to_json(const Trajectory& traj) {
    json targets = json::array();
    for (const auto& x : traj.jump_targets) targets.push_back(point_to_json(x));
    return json{{"dim", int(traj.start.size())},
                {"start", point_to_json(traj.start)},
                {"horizon", traj.horizon},
                {"jump_times", traj.jump_times},
                {"jump_targets", targets}};
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
    int dim = dim_from_json(j);
    Trajectory traj;
    traj.start = point_from_json(j.at("start"), dim);
    traj.horizon = j.at("horizon").get<double>();
    traj.jump_times = j.at("jump_times").get<std::vector<double>>();
    for (const auto& t : j.at("jump_targets")) traj.jump_targets.push_back(point_from_json(t, dim));
    return traj;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace ldrw
