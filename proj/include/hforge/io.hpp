#pragma once

// JSON and CSV exchange formats.
//
//   IFS:       {"dimension": d, "maps": [{"ratio": r, "translation": [...]}, ...]}
//   params:    {"d", "s", "eps", "n", "ell", "r", "F": [[...], ...], "forced_n"}
//   estimate:  {"lower", "upper", "lower_rigorous", "upper_rigorous", "witness": {...}}
//   sweep CSV: t,lower,upper,lower_rigorous,upper_rigorous

#include <hforge/construction.hpp>
#include <hforge/density.hpp>
#include <hforge/errors.hpp>
#include <hforge/geometry.hpp>
#include <hforge/ifs.hpp>
#include <hforge/search.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hforge::io {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("cannot write " + path);
}

inline json parse(const std::string& text, const std::string& origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(origin + ": " + e.what());
    }
}

inline json to_json(const Point& p)
{
    json a = json::array();
    for (double x : p.coords()) a.push_back(x);
    return a;
}

inline Point point_from_json(const json& j, std::size_t dim)
{
    if (!j.is_array() || j.size() != dim) throw std::invalid_argument("point must be an array of " + std::to_string(dim) + " numbers");
    std::vector<double> xs;
    for (const auto& v : j) {
        if (!v.is_number()) throw std::invalid_argument("point coordinates must be numbers");
        xs.push_back(v.get<double>());
    }
    return Point(std::span<const double>(xs));
}

// Structural problems in a document surface as IoError; out-of-range values
// keep their std::invalid_argument type.
template <class F>
auto structured(const std::string& what, F&& f)
{
    try {
        return f();
    } catch (const json::exception& e) {
        throw IoError(what + ": " + e.what());
    }
}

inline json to_json(const IFS& f)
{
    json maps = json::array();
    for (const auto& m : f.maps()) maps.push_back({{"ratio", m.ratio}, {"translation", to_json(m.translation)}});
    return {{"dimension", f.dimension()}, {"maps", maps}};
}

inline IFS ifs_from_json(const json& j)
{
    return structured("IFS", [&] {
        const int d = j.at("dimension").get<int>();
        if (d < 1 || static_cast<std::size_t>(d) > kMaxDimension) throw std::invalid_argument("IFS dimension out of range");
        std::vector<Similitude> maps;
        for (const auto& m : j.at("maps")) {
            maps.push_back({m.at("ratio").get<double>(), point_from_json(m.at("translation"), static_cast<std::size_t>(d))});
        }
        return IFS(static_cast<std::size_t>(d), std::move(maps));
    });
}

inline json to_json(const ConstructionParams& p)
{
    json pts = json::array();
    for (const auto& b : p.F) pts.push_back(to_json(b));
    json j = {{"d", p.d}, {"s", p.s}, {"eps", p.eps}, {"n", p.n}, {"ell", p.ell}, {"r", p.r}, {"F", pts}};
    if (p.forced) j["forced_n"] = true;
    return j;
}

inline ConstructionParams params_from_json(const json& j)
{
    return structured("params", [&] {
        ConstructionParams p;
        p.d = j.at("d").get<int>();
        p.s = j.at("s").get<double>();
        p.eps = j.at("eps").get<double>();
        require_feasible(p.d, p.s, p.eps);
        p.n = j.at("n").get<int>();
        p.ell = j.at("ell").get<long long>();
        p.r = j.at("r").get<double>();
        p.forced = j.value("forced_n", false);
        for (const auto& b : j.at("F")) p.F.push_back(point_from_json(b, static_cast<std::size_t>(p.d)));
        if (p.n < 1) throw std::invalid_argument("params: n must be positive");
        if (p.ell != static_cast<long long>(p.F.size())) throw std::invalid_argument("params: ell differs from |F|");
        if (!(p.r > 0.0 && p.r < 1.0)) throw std::invalid_argument("params: r must lie in (0, 1)");
        return p;
    });
}

inline json to_json(const ConvexCandidate& u)
{
    return std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return {{"type", "ball"}, {"center", to_json(c.center)}, {"radius", c.radius}};
            } else if constexpr (std::is_same_v<T, AxisBox>) {
                return {{"type", "box"}, {"center", to_json(c.center)}, {"half_width", c.half_width}};
            } else {
                json v = json::array();
                for (const auto& p : c.vertices()) v.push_back(to_json(p));
                return {{"type", "hull"}, {"vertices", v}};
            }
        },
        u);
}

inline json to_json(const DensityRecord& r)
{
    return {{"candidate", to_json(r.candidate)},
            {"mu", {r.mu.lo, r.mu.hi}},
            {"diam", r.diam},
            {"ratio", {r.ratio.lo, r.ratio.hi}}};
}

inline json to_json(const HausdorffEstimate& e)
{
    return {{"lower", e.lower},
            {"upper", e.upper},
            {"lower_rigorous", e.lower_rigorous},
            {"upper_rigorous", e.upper_rigorous},
            {"witness", to_json(e.witness)}};
}

/// Lower/upper and flags only; the witness is not reconstructed.
inline HausdorffEstimate estimate_from_json(const json& j)
{
    return structured("estimate", [&] {
        HausdorffEstimate e;
        e.lower = j.at("lower").get<double>();
        e.upper = j.at("upper").get<double>();
        e.lower_rigorous = j.at("lower_rigorous").get<bool>();
        e.upper_rigorous = j.at("upper_rigorous").get<bool>();
        return e;
    });
}

inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline constexpr const char* kSweepHeader = "t,lower,upper,lower_rigorous,upper_rigorous";

inline std::string sweep_csv(const std::vector<SweepPoint>& pts)
{
    std::string out = kSweepHeader;
    out += '\n';
    for (const auto& p : pts) {
        const auto& e = p.estimate;
        out += format_double(p.t) + ',' + format_double(e.lower) + ',' + format_double(e.upper) + ','
               + (e.lower_rigorous ? "true" : "false") + ',' + (e.upper_rigorous ? "true" : "false") + '\n';
    }
    return out;
}

/// Parses a sweep CSV; a missing header or zero data rows is an IoError.
inline std::vector<SweepPoint> sweep_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("sweep CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepHeader) throw IoError("sweep CSV: unexpected header '" + line + "'");

    auto flag = [](const std::string& s) {
        if (s == "true") return true;
        if (s == "false") return false;
        throw IoError("sweep CSV: bad boolean '" + s + "'");
    };
    auto number = [](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw IoError("sweep CSV: bad number '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            throw IoError("sweep CSV: bad number '" + s + "'");
        }
    };

    std::vector<SweepPoint> pts;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
        if (f.size() != 5) throw IoError("sweep CSV: expected 5 fields in '" + line + "'");
        SweepPoint p;
        p.t = number(f[0]);
        p.estimate.lower = number(f[1]);
        p.estimate.upper = number(f[2]);
        p.estimate.lower_rigorous = flag(f[3]);
        p.estimate.upper_rigorous = flag(f[4]);
        pts.push_back(p);
    }
    if (pts.empty()) throw IoError("sweep CSV has no data rows");
    return pts;
}

} // namespace hforge::io
