#include "mixhess/io.hpp"

#include "mixhess/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace mixhess {

namespace {

std::string g17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_value(const std::string& w, const std::filesystem::path& path) {
    if (w == "nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size() || !std::isfinite(v))
        throw ConfigError("field dump '" + path.string() + "': bad value '" + w + "'");
    return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField& u, int k) {
    const auto& g = u.grid();
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << "n " << g.domain().n << '\n' << "k " << k << '\n' << "N " << g.points_per_axis() << '\n';
    out << "h " << g17(g.spacing()) << '\n' << "box";
    for (int a = 0; a < g.dim(); ++a) out << ' ' << g17(g.lower()[a]) << ' ' << g17(g.lower()[a] + 2.0 * g.half_width());
    out << '\n';
    const auto vals = u.values();
    for (std::int64_t p = 0; p < g.num_points(); ++p) {
        const auto q = g.unknown_of(p);
        out << (q < 0 ? std::string("nan") : g17(vals[q])) << '\n';
    }
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

FieldDump read_field_dump(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read field dump '" + path.string() + "'");
    FieldDump d;
    auto header = [&](const char* key) {
        std::string line;
        if (!std::getline(in, line)) throw ConfigError("field dump: missing header line '" + std::string(key) + "'");
        std::istringstream s(line);
        std::string name;
        s >> name;
        if (name != key) throw ConfigError("field dump: expected header '" + std::string(key) + "', got '" + name + "'");
        std::vector<std::string> words;
        for (std::string w; s >> w;) words.push_back(w);
        return words;
    };
    auto single = [&](const char* key) {
        auto w = header(key);
        if (w.size() != 1) throw ConfigError("field dump: header '" + std::string(key) + "' takes one value");
        return w[0];
    };
    d.n = std::stoi(single("n"));
    d.k = std::stoi(single("k"));
    d.N = std::stoi(single("N"));
    d.h = parse_value(single("h"), path);
    for (const auto& w : header("box")) d.box.push_back(parse_value(w, path));
    if (d.n < 1 || d.N < 2 || static_cast<int>(d.box.size()) != 4 * d.n)
        throw ConfigError("field dump: inconsistent header");
    const double total = std::pow(static_cast<double>(d.N), 2 * d.n);
    if (total > 6e7) throw ConfigError("field dump: grid too large");
    d.values.reserve(static_cast<std::size_t>(total));
    for (std::string w; in >> w;) d.values.push_back(parse_value(w, path));
    if (d.values.size() != static_cast<std::size_t>(total))
        throw ConfigError("field dump: expected " + std::to_string(static_cast<long long>(total)) + " values, found " +
                          std::to_string(d.values.size()));
    return d;
}

ScalarField field_from_dump(const FieldDump& d, std::shared_ptr<const Grid> grid) {
    const auto& g = *grid;
    if (d.n != g.domain().n || d.N != g.points_per_axis())
        throw ConfigError("field dump: dimension or N does not match the configured grid");
    const double tol = 1e-12 * std::max(1.0, g.half_width());
    if (std::abs(d.h - g.spacing()) > tol) throw ConfigError("field dump: spacing does not match the configured grid");
    for (int a = 0; a < g.dim(); ++a)
        if (std::abs(d.box[2 * a] - g.lower()[a]) > tol ||
            std::abs(d.box[2 * a + 1] - (g.lower()[a] + 2.0 * g.half_width())) > tol)
            throw ConfigError("field dump: box does not match the configured grid");
    std::vector<double> vals(static_cast<std::size_t>(g.num_unknowns()));
    for (std::int64_t p = 0; p < g.num_points(); ++p) {
        const auto q = g.unknown_of(p);
        const double v = d.values[static_cast<std::size_t>(p)];
        if (q < 0) {
            if (!std::isnan(v)) throw ConfigError("field dump: value at an exterior point " + std::to_string(p));
        } else {
            if (std::isnan(v)) throw ConfigError("field dump: missing value at grid point " + std::to_string(p));
            vals[q] = v;
        }
    }
    return ScalarField(std::move(grid), std::move(vals));
}

Json grid_json(const Grid& g) {
    Json j;
    j["N"] = g.points_per_axis();
    j["h"] = g.spacing();
    j["half_width"] = g.half_width();
    j["unknowns"] = g.num_unknowns();
    j["interior_points"] = g.interior().size();
    j["band_points"] = g.band().size();
    return j;
}

Json to_json(const SolveReport& r) {
    Json j;
    j["iterations"] = r.iterations;
    j["interior_residual"] = r.interior_residual;
    j["boundary_residual"] = r.boundary_residual;
    j["admissibility_margin"] = r.margin;
    j["diagnostics"] = {{"sup_Du", r.diagnostics.sup_Du},
                        {"sup_D2u", r.diagnostics.sup_D2u},
                        {"max_Dnunu", r.diagnostics.max_Dnunu},
                        {"hessian_ratio", r.diagnostics.hessian_ratio}};
    Json hist = Json::array();
    for (const auto& h : r.history)
        hist.push_back({{"merit", h.merit},
                        {"max_residual", h.max_residual},
                        {"step", h.step},
                        {"margin", h.margin},
                        {"linear_iterations", h.linear_iterations}});
    j["history"] = hist;
    return j;
}

namespace {

Json check_json(const CheckResult& c) {
    Json j;
    j["ok"] = c.ok;
    j["margin"] = c.margin;
    j["worst"] = {{"unknown", c.worst.unknown}, {"coords", c.worst.coords}, {"value", c.worst.value}, {"bound", c.worst.bound}};
    return j;
}

}  // namespace

Json to_json(const EstimateReport& r) {
    Json j;
    j["M0"] = r.M0;
    j["A_barrier"] = r.A_barrier;
    j["slack_c0"] = r.slack_c0;
    j["sup_eps_u"] = r.sup_eps_u;
    j["sup_Du"] = r.sup_Du;
    j["sup_D2u"] = r.sup_D2u;
    j["max_Dnunu"] = r.max_Dnunu;
    j["hessian_ratio"] = r.hessian_ratio;
    j["c0"] = check_json(r.c0);
    j["ratios"] = check_json(r.ratios);
    j["traces"] = check_json(r.traces);
    j["barrier"] = check_json(r.barrier);
    j["all_ok"] = r.all_ok();
    return j;
}

Json to_json(const IdentityReport& r) {
    Json j;
    j["ok"] = r.ok();
    Json props = Json::array();
    for (const auto& p : r.results)
        props.push_back({{"property", p.property},
                         {"samples", p.samples},
                         {"worst_margin", p.worst_margin},
                         {"tolerance", p.tolerance},
                         {"ok", p.ok()},
                         {"worst_case", p.worst_case}});
    j["properties"] = props;
    return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

std::string CsvWriter::num(double v) { return g17(v); }

}  // namespace mixhess
