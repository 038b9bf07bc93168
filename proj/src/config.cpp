#include "lithoqed/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lithoqed {

namespace {

std::string where(const std::string& source, int line) {
    return line > 0 ? source + ":" + std::to_string(line) : source;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"atom", {"omega_A", "dipole", "polarization"}},
        {"substrate", {"material", "epsilon", "oscillators"}},
        {"geometry", {"type", "material", "epsilon", "oscillators", "a", "N", "w", "h", "L", "x0", "boxes"}},
        {"quadrature",
         {"rel_tol", "abs_tol", "max_subdivisions", "truncation", "lambda", "xi_nodes", "split_at_branch_point"}},
        {"scan", {"quantity", "normalization", "origin", "axis1", "axis2", "direction"}},
    };
    return s;
}

// Typed access to the entries with line-anchored errors.
class Reader {
public:
    Reader(const std::vector<ConfigEntry>& e, std::string source) : entries_(e), source_(std::move(source)) {
        for (const auto& x : entries_) {
            auto sec = schema().find(x.section);
            if (sec == schema().end()) fail(x.line, "unknown section [" + x.section + "]");
            if (!sec->second.count(x.key)) fail(x.line, "unknown key '" + x.key + "' in [" + x.section + "]");
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const { throw ConfigError(source_, line, msg); }

    const ConfigEntry* find(const std::string& sec, const std::string& key) const {
        for (const auto& x : entries_)
            if (x.section == sec && x.key == key) return &x;
        return nullptr;
    }
    int line(const std::string& sec, const std::string& key) const {
        const auto* e = find(sec, key);
        return e ? e->line : 0;
    }
    [[noreturn]] void bad(const ConfigEntry& e, const std::string& msg) const {
        fail(e.line, "[" + e.section + "] " + e.key + ": " + msg);
    }

    double to_double(const ConfigEntry& e, const std::string& text) const {
        double v = 0.0;
        const auto* first = text.data();
        const auto* last = text.data() + text.size();
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || p != last) bad(e, "expected a number, got '" + text + "'");
        return v;
    }

    std::optional<double> number(const std::string& sec, const std::string& key) const {
        const auto* e = find(sec, key);
        if (!e) return std::nullopt;
        return to_double(*e, e->value);
    }
    double number(const std::string& sec, const std::string& key, double dflt) const {
        return number(sec, key).value_or(dflt);
    }
    double required_number(const std::string& sec, const std::string& key, int line_hint) const {
        auto v = number(sec, key);
        if (!v) fail(line_hint, "[" + sec + "] needs '" + key + "'");
        return *v;
    }
    int integer(const std::string& sec, const std::string& key, int dflt) const {
        const auto* e = find(sec, key);
        if (!e) return dflt;
        int v = 0;
        auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
        if (ec != std::errc() || p != e->value.data() + e->value.size())
            bad(*e, "expected an integer, got '" + e->value + "'");
        return v;
    }
    std::string word(const std::string& sec, const std::string& key, const std::string& dflt,
                     std::initializer_list<const char*> allowed) const {
        const auto* e = find(sec, key);
        if (!e) return dflt;
        for (const char* a : allowed)
            if (e->value == a) return e->value;
        std::string list;
        for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
        bad(*e, "'" + e->value + "' is not one of " + list);
    }
    std::vector<double> numbers(const ConfigEntry& e, const std::string& text) const {
        std::vector<double> out;
        for (const auto& w : words(text)) out.push_back(to_double(e, w));
        return out;
    }

private:
    const std::vector<ConfigEntry>& entries_;
    std::string source_;
};

MaterialModel read_material(const Reader& rd, const std::string& sec, const std::string& dflt) {
    const std::string kind = rd.word(sec, "material", dflt, {"mirror", "vacuum", "constant", "drude-lorentz"});
    const int at = rd.line(sec, "material");
    if (kind == "mirror") return MaterialModel::perfect_mirror();
    if (kind == "vacuum") return MaterialModel::vacuum();
    if (kind == "constant") {
        const double eps = rd.required_number(sec, "epsilon", at);
        try {
            return MaterialModel::constant(eps);
        } catch (const std::exception& ex) {
            rd.fail(rd.line(sec, "epsilon"), "[" + sec + "] " + ex.what());
        }
    }
    const auto* e = rd.find(sec, "oscillators");
    if (!e) rd.fail(at, "[" + sec + "] drude-lorentz needs 'oscillators = S w g; ...'");
    std::vector<Oscillator> osc;
    for (const auto& triple : split(e->value, ';')) {
        auto v = rd.numbers(*e, triple);
        if (v.size() != 3) rd.bad(*e, "each oscillator is 'strength frequency damping'");
        osc.push_back({v[0], v[1], v[2]});
    }
    try {
        return MaterialModel::drude_lorentz(osc);
    } catch (const std::exception& ex) {
        rd.bad(*e, ex.what());
    }
}

Vec3 read_direction(const Reader& rd, const ConfigEntry& e) {
    if (e.value == "x") return Vec3::UnitX();
    if (e.value == "y") return Vec3::UnitY();
    if (e.value == "z") return Vec3::UnitZ();
    auto v = rd.numbers(e, e.value);
    if (v.size() != 3) rd.bad(e, "expected x, y, z or three numbers");
    const Vec3 d(v[0], v[1], v[2]);
    if (!(d.norm() > 0.0)) rd.bad(e, "direction must be nonzero");
    return d.normalized();
}

GridAxis read_axis(const Reader& rd, const ConfigEntry& e) {
    auto w = words(e.value);
    if (w.size() != 4) rd.bad(e, "expected 'x|y|z start stop count'");
    GridAxis a;
    if (w[0] == "x") a.component = 0;
    else if (w[0] == "y") a.component = 1;
    else if (w[0] == "z") a.component = 2;
    else rd.bad(e, "axis must be x, y or z, got '" + w[0] + "'");
    a.start = rd.to_double(e, w[1]);
    a.stop = rd.to_double(e, w[2]);
    int n = 0;
    auto [p, ec] = std::from_chars(w[3].data(), w[3].data() + w[3].size(), n);
    if (ec != std::errc() || p != w[3].data() + w[3].size()) rd.bad(e, "count must be an integer");
    if (n < 1) rd.bad(e, "count must be >= 1");
    a.count = n;
    return a;
}

RunConfig interpret(std::vector<ConfigEntry> entries, const std::string& source) {
    Reader rd(entries, source);
    RunConfig cfg;
    cfg.source = source;

    // atom
    cfg.atom.omega_A = rd.number("atom", "omega_A", 1.0);
    cfg.atom.dipole = rd.number("atom", "dipole", 1.0);
    const std::string pol = rd.word("atom", "polarization", "isotropic", {"x", "y", "z", "isotropic"});
    cfg.atom.isotropic = pol == "isotropic";
    if (pol == "x") cfg.atom.direction = Vec3::UnitX();
    if (pol == "y") cfg.atom.direction = Vec3::UnitY();
    if (pol == "z") cfg.atom.direction = Vec3::UnitZ();
    try {
        cfg.atom.validate();
    } catch (const std::exception& ex) {
        rd.fail(rd.line("atom", "omega_A") ? rd.line("atom", "omega_A") : rd.line("atom", "dipole"), ex.what());
    }

    cfg.env.substrate = read_material(rd, "substrate", "mirror");

    // geometry
    const std::string type = rd.word("geometry", "type", "none", {"none", "cube", "grating", "boxes"});
    const int tline = rd.line("geometry", "type");
    try {
        if (type != "none") {
            const MaterialModel m = read_material(rd, "geometry", "constant");
            if (type == "cube") {
                cfg.geometry = build_cube(rd.number("geometry", "a", 1.0), m);
            } else if (type == "grating") {
                GratingSpec g;
                g.N = rd.integer("geometry", "N", g.N);
                g.w = rd.number("geometry", "w", g.w);
                g.h = rd.number("geometry", "h", g.h);
                g.L = rd.number("geometry", "L", g.L);
                g.x0_override = rd.number("geometry", "x0");
                cfg.geometry = build_grating(g, m);
            } else {
                const auto* e = rd.find("geometry", "boxes");
                if (!e) rd.fail(tline, "type = boxes needs 'boxes = x0 x1 y0 y1 z0 z1; ...'");
                for (const auto& b : split(e->value, ';')) {
                    auto v = rd.numbers(*e, b);
                    if (v.size() != 6) rd.bad(*e, "each box is 'x0 x1 y0 y1 z0 z1'");
                    cfg.geometry.boxes.emplace_back(Interval{v[0], v[1]}, Interval{v[2], v[3]}, Interval{v[4], v[5]});
                }
                cfg.geometry.material = m;
            }
            cfg.geometry.validate();
        }
    } catch (const std::domain_error& ex) {
        rd.fail(tline, std::string("[geometry] ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        rd.fail(tline, std::string("[geometry] ") + ex.what());
    }

    // quadrature
    auto& q = cfg.quadrature;
    q.rel_tol = rd.number("quadrature", "rel_tol", q.rel_tol);
    q.abs_tol = rd.number("quadrature", "abs_tol", q.abs_tol);
    q.max_subdivisions = rd.integer("quadrature", "max_subdivisions", q.max_subdivisions);
    q.xi_nodes = rd.integer("quadrature", "xi_nodes", q.xi_nodes);
    q.fixed_lambda = rd.number("quadrature", "lambda", q.fixed_lambda);
    q.k_truncation_policy = rd.word("quadrature", "truncation", "auto", {"auto", "fixed"}) == "fixed"
                                ? TruncationPolicy::fixed
                                : TruncationPolicy::auto_exponential;
    q.split_at_branch_point = rd.word("quadrature", "split_at_branch_point", "true", {"true", "false"}) == "true";
    try {
        q.validate();
    } catch (const std::exception& ex) {
        rd.fail(rd.line("quadrature", "rel_tol"), std::string("[quadrature] ") + ex.what());
    }

    // scan
    auto& s = cfg.scan;
    if (!rd.find("scan", "quantity")) rd.fail(0, "[scan] needs 'quantity = decay-rate | cp-potential | cp-force'");
    const std::string qty = rd.word("scan", "quantity", "", {"decay-rate", "cp-potential", "cp-force"});
    s.quantity = qty == "decay-rate"     ? Quantity::decay_rate
                 : qty == "cp-potential" ? Quantity::cp_potential
                                         : Quantity::cp_force;
    std::string dflt_norm = s.quantity == Quantity::decay_rate
                                ? (cfg.geometry.boxes.empty() ? "free-space" : "bare-halfspace")
                                : (s.quantity == Quantity::cp_potential ? "U0" : "F0");
    const std::string norm =
        rd.word("scan", "normalization", dflt_norm, {"raw", "bare-halfspace", "free-space", "U0", "F0"});
    const bool ok = norm == "raw" || (s.quantity == Quantity::decay_rate && (norm == "free-space" || norm == "bare-halfspace")) ||
                    (s.quantity == Quantity::cp_potential && (norm == "U0" || norm == "bare-halfspace")) ||
                    (s.quantity == Quantity::cp_force && norm == "F0");
    if (!ok) rd.bad(*rd.find("scan", "normalization"), "'" + norm + "' does not apply to " + qty);
    s.normalization = norm == "raw"              ? Normalization::raw
                      : norm == "bare-halfspace" ? Normalization::bare_halfspace
                      : norm == "free-space"     ? Normalization::free_space
                      : norm == "U0"             ? Normalization::U0
                                                 : Normalization::F0;
    if (const auto* e = rd.find("scan", "origin")) {
        auto v = rd.numbers(*e, e->value);
        if (v.size() != 3) rd.bad(*e, "expected three numbers");
        s.origin = Vec3(v[0], v[1], v[2]);
    }
    for (const char* key : {"axis1", "axis2"})
        if (const auto* e = rd.find("scan", key)) s.axes.push_back(read_axis(rd, *e));
    if (s.axes.size() == 2 && s.axes[0].component == s.axes[1].component)
        rd.bad(*rd.find("scan", "axis2"), "both axes run along the same coordinate");
    if (!rd.find("scan", "axis1") && rd.find("scan", "axis2"))
        rd.bad(*rd.find("scan", "axis2"), "axis2 needs axis1");
    if (const auto* e = rd.find("scan", "direction")) s.force_direction = read_direction(rd, *e);

    cfg.entries = std::move(entries);
    return cfg;
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, const std::string& msg)
    : std::runtime_error(where(source, line) + ": " + msg), source_(std::move(source)), line_(line) {}

const char* to_string(Quantity q) {
    switch (q) {
        case Quantity::decay_rate: return "decay-rate";
        case Quantity::cp_potential: return "cp-potential";
        case Quantity::cp_force: return "cp-force";
    }
    return "?";
}

const char* to_string(Normalization n) {
    switch (n) {
        case Normalization::raw: return "raw";
        case Normalization::bare_halfspace: return "bare-halfspace";
        case Normalization::free_space: return "free-space";
        case Normalization::U0: return "U0";
        case Normalization::F0: return "F0";
    }
    return "?";
}

std::size_t ScanSpec::size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
}

std::vector<Vec3> ScanSpec::points() const {
    std::vector<Vec3> out;
    out.reserve(size());
    if (axes.empty()) return {origin};
    const GridAxis& a = axes[0];
    for (int i = 0; i < a.count; ++i) {
        Vec3 p = origin;
        p[a.component] = a.at(i);
        if (axes.size() == 1) {
            out.push_back(p);
            continue;
        }
        const GridAxis& b = axes[1];
        for (int j = 0; j < b.count; ++j) {
            Vec3 pj = p;
            pj[b.component] = b.at(j);
            out.push_back(pj);
        }
    }
    return out;
}

RunConfig parse_config_ini(std::istream& in, const std::string& source) {
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    // syntax (and duplicate keys) from the ini parser
    boost::property_tree::ptree pt;
    try {
        std::istringstream s(text);
        boost::property_tree::ini_parser::read_ini(s, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(source, static_cast<int>(e.line()), e.message());
    }

    // second pass only to learn which line each key sits on
    std::map<std::pair<std::string, std::string>, int> lines;
    {
        std::istringstream s(text);
        std::string raw, section;
        int n = 0;
        while (std::getline(s, raw)) {
            ++n;
            const std::string l = trim(raw);
            if (l.empty() || l[0] == ';' || l[0] == '#') continue;
            if (l[0] == '[') {
                section = trim(l.substr(1, l.find(']') - 1));
                continue;
            }
            const auto eq = l.find('=');
            if (eq == std::string::npos) continue;
            if (section.empty()) throw ConfigError(source, n, "key outside any section");
            lines[{section, trim(l.substr(0, eq))}] = n;
        }
    }

    std::vector<ConfigEntry> entries;
    for (const auto& [sec, child] : pt) {
        if (child.empty() && !child.data().empty())
            throw ConfigError(source, lines.count({"", sec}) ? lines[{"", sec}] : 0, "key outside any section");
        for (const auto& [key, v] : child) entries.push_back({sec, key, trim(v.data()), lines[{sec, key}]});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ConfigEntry& a, const ConfigEntry& b) { return a.line < b.line; });
    return interpret(std::move(entries), source);
}

RunConfig parse_config_json(const std::string& text, const std::string& source) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(source, 0, std::string("JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("config")) j = j["config"];
    if (!j.is_object()) throw ConfigError(source, 0, "JSON config must be an object of sections");
    std::vector<ConfigEntry> entries;
    for (const auto& [sec, obj] : j.items()) {
        if (!obj.is_object()) throw ConfigError(source, 0, "section '" + sec + "' must be an object");
        for (const auto& [key, v] : obj.items())
            entries.push_back({sec, key, v.is_string() ? v.get<std::string>() : v.dump(), 0});
    }
    return interpret(std::move(entries), source);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_config_json(text, path);
    std::istringstream s(text);
    return parse_config_ini(s, path);
}

std::string to_ini(const std::vector<ConfigEntry>& entries) {
    std::vector<std::string> order;
    for (const auto& e : entries)
        if (std::find(order.begin(), order.end(), e.section) == order.end()) order.push_back(e.section);
    std::string out;
    for (const auto& sec : order) {
        if (!out.empty()) out += "\n";
        out += "[" + sec + "]\n";
        for (const auto& e : entries)
            if (e.section == sec) out += e.key + " = " + e.value + "\n";
    }
    return out;
}

void check_scan_points(const RunConfig& cfg) {
    const int at = [&] {
        for (const auto& e : cfg.entries)
            if (e.section == "scan" && (e.key == "axis1" || e.key == "origin")) return e.line;
        return 0;
    }();
    for (const Vec3& p : cfg.scan.points()) {
        std::ostringstream name;
        name.precision(17);
        name << "(" << p.x() << ", " << p.y() << ", " << p.z() << ")";
        if (!(p.z() > 0.0)) throw ConfigError(cfg.source, at, "grid point " + name.str() + " is not above the substrate");
        if (cfg.geometry.contains(p))
            throw ConfigError(cfg.source, at, "grid point " + name.str() + " lies inside the deposition");
    }
}

}  // namespace lithoqed
