#include "config.hpp"

#include "expression.hpp"

#include "discenv/envelope.hpp"
#include "discenv/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>

namespace discenv::cli {

const char* command_name(Command c) {
    switch (c) {
        case Command::Envelope: return "envelope";
        case Command::Oracle: return "oracle";
        case Command::Compare: return "compare";
        case Command::Homotopy: return "homotopy";
        case Command::Cesaro: return "cesaro";
    }
    return "";
}

int ConfigSource::line_of(const std::string& pointer) const {
    std::string p = pointer;
    for (;;) {
        if (const auto it = lines.find(p); it != lines.end()) return it->second;
        const auto slash = p.rfind('/');
        if (slash == std::string::npos || p.empty()) return 1;
        p.resize(slash);
    }
}

namespace {

std::string escape_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

// Walks the text while the JSON parser consumes it, so callbacks can ask for
// the line of the last character read.
class CountingIterator {
public:
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    CountingIterator(const char* p, const char** cursor) : p_(p), cursor_(cursor) {}
    reference operator*() const { return *p_; }
    CountingIterator& operator++() {
        *cursor_ = ++p_;
        return *this;
    }
    CountingIterator operator++(int) {
        auto old = *this;
        ++*this;
        return old;
    }
    bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
    bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

private:
    const char* p_;
    const char** cursor_;
};

int line_at(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// ---------------------------------------------------------------------------
// Section reader
// ---------------------------------------------------------------------------

class Section {
public:
    Section(const ConfigSource& src, std::string ptr, const Json& j) : src_(src), ptr_(std::move(ptr)), j_(j) {
        if (!j_.is_object()) fail_at(ptr_, "expected an object");
    }

    [[noreturn]] void fail_at(const std::string& pointer, const std::string& what) const {
        throw SchemaError(src_.name + ":" + std::to_string(src_.line_of(pointer)) + ": " +
                          (pointer.empty() ? std::string("/") : pointer) + ": " + what);
    }
    [[noreturn]] void fail(const std::string& key, const std::string& what) const { fail_at(at(key), what); }

    std::string at(const std::string& key) const { return ptr_ + "/" + escape_token(key); }
    const std::string& pointer() const { return ptr_; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const Json* get(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const Json& require(const std::string& key) {
        const Json* v = get(key);
        if (!v) fail_at(ptr_, "missing required key \"" + key + "\"");
        return *v;
    }

    double number(const std::string& key, std::optional<double> def, double lo = -INFINITY, double hi = INFINITY,
                  bool open_lo = false) {
        const Json* v = get(key);
        double x;
        if (!v) {
            if (!def) fail_at(ptr_, "missing required key \"" + key + "\"");
            x = *def;
        } else {
            if (!v->is_number()) fail(key, "expected a number");
            x = v->get<double>();
        }
        if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo))
            fail(key, "value " + format(x) + " out of range " + (open_lo ? "(" : "[") + format(lo) + ", " +
                          format(hi) + "]");
        out[key] = x;
        return x;
    }

    std::optional<double> optional_number(const std::string& key) {
        const Json* v = get(key);
        if (!v || v->is_null()) {
            out[key] = nullptr;
            return std::nullopt;
        }
        if (!v->is_number()) fail(key, "expected a number or null");
        out[key] = v->get<double>();
        return v->get<double>();
    }

    std::int64_t integer(const std::string& key, std::optional<std::int64_t> def, std::int64_t lo,
                         std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
        const Json* v = get(key);
        std::int64_t x;
        if (!v) {
            if (!def) fail_at(ptr_, "missing required key \"" + key + "\"");
            x = *def;
        } else {
            if (!v->is_number_integer()) fail(key, "expected an integer");
            x = v->get<std::int64_t>();
        }
        if (x < lo || x > hi) fail(key, "value " + std::to_string(x) + " out of range");
        out[key] = x;
        return x;
    }

    bool boolean(const std::string& key, bool def) {
        const Json* v = get(key);
        bool x = def;
        if (v) {
            if (!v->is_boolean()) fail(key, "expected true or false");
            x = v->get<bool>();
        }
        out[key] = x;
        return x;
    }

    std::string string(const std::string& key, std::optional<std::string> def,
                       const std::vector<std::string>& allowed = {}) {
        const Json* v = get(key);
        std::string x;
        if (!v) {
            if (!def) fail_at(ptr_, "missing required key \"" + key + "\"");
            x = *def;
        } else {
            if (!v->is_string()) fail(key, "expected a string");
            x = v->get<std::string>();
        }
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), x) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail(key, "unknown value \"" + x + "\" (expected one of " + list + ")");
        }
        out[key] = x;
        return x;
    }

    std::vector<std::string> strings(const std::string& key, bool required) {
        const Json* v = get(key);
        if (!v) {
            if (required) fail_at(ptr_, "missing required key \"" + key + "\"");
            return {};
        }
        if (!v->is_array() || v->empty()) fail(key, "expected a nonempty array of strings");
        std::vector<std::string> xs;
        for (std::size_t i = 0; i < v->size(); ++i) {
            if (!(*v)[i].is_string()) fail_at(at(key) + "/" + std::to_string(i), "expected a string");
            xs.push_back((*v)[i].get<std::string>());
        }
        out[key] = xs;
        return xs;
    }

    Section sub(const std::string& key) {
        const Json& v = require(key);
        return Section(src_, at(key), v);
    }

    void finish() {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(k, "unknown key \"" + k + "\"");
    }

    Json out = Json::object();

private:
    static std::string format(double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }

    const ConfigSource& src_;
    std::string ptr_;
    const Json& j_;
    std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

const std::vector<std::string> kPairTypes{"planar_annulus", "ball", "shell", "hartogs", "counterexample"};
const std::vector<std::string> kBuiltins{"constant",   "log_abs_last", "neg_log_abs_last", "real_first",
                                         "real_first_plus_last_squared", "norm_squared", "counterexample"};

Json radius_spec(Section& s, const std::string& key, double def, std::size_t base_dim) {
    const Json* v = s.get(key);
    if (!v) return def;
    if (v->is_number()) {
        if (!(v->get<double>() >= 0.0)) s.fail(key, "radius must be nonnegative");
        return *v;
    }
    if (v->is_string()) {
        try {
            Expression(v->get<std::string>(), coordinate_names(base_dim));
        } catch (const ConfigError& e) {
            s.fail(key, e.what());
        }
        return *v;
    }
    s.fail(key, "expected a number or an expression over the base coordinates");
}

Json read_pair(Section s) {
    const std::string type = s.string("type", std::nullopt, kPairTypes);
    if (type == "ball") {
        s.number("radius", 1.0, 0.0, INFINITY, true);
        s.integer("dim", 1, 1, 16);
    } else if (type == "shell") {
        s.integer("dim", 2, 2, 16);
    } else if (type == "hartogs") {
        s.number("base_radius", 1.0, 0.0, INFINITY, true);
        const auto base_dim = s.integer("base_dim", 1, 1, 15);
        s.out["r"] = radius_spec(s, "r", 0.0, std::size_t(base_dim));
        s.out["R"] = radius_spec(s, "R", 1.0, std::size_t(base_dim));
    } else if (type == "counterexample") {
        const CounterexampleParams d;
        s.number("delta", d.delta, 0.0, 0.5, true);
        s.number("tube_radius", d.tube_radius, 0.0, 1.0, true);
        s.number("rho_u", d.rho_u, 0.0, 1.0, true);
        s.number("eps_moll", d.eps_moll, 0.0, 1.0, true);
    }
    s.finish();
    try {
        build_pair(s.out);
    } catch (const Error& e) {
        s.fail_at(s.pointer(), e.what());
    }
    return s.out;
}

std::size_t pair_dim(const Json& pair) {
    const std::string t = pair["type"];
    if (t == "planar_annulus") return 1;
    if (t == "ball" || t == "shell") return pair["dim"].get<std::size_t>();
    if (t == "hartogs") return pair["base_dim"].get<std::size_t>() + 1;
    return 2;
}

Json read_obstacle(Section s, const Json& pair) {
    const bool builtin = s.has("builtin");
    if (builtin == s.has("expression")) s.fail_at(s.pointer(), "give exactly one of \"builtin\" and \"expression\"");
    if (builtin) {
        const std::string name = s.string("builtin", std::nullopt, kBuiltins);
        if (name == "constant") s.number("value", std::nullopt);
        if (name == "counterexample") {
            if (pair.is_null() || pair["type"] != "counterexample")
                s.fail("builtin", "the counterexample obstacle needs the counterexample pair");
        } else {
            s.optional_number("lower");
            s.optional_number("upper");
        }
    } else {
        const std::string src = s.string("expression", std::nullopt);
        if (pair.is_null()) s.fail_at(s.pointer(), "an expression obstacle needs a pair");
        try {
            Expression(src, coordinate_names(pair_dim(pair)));
        } catch (const ConfigError& e) {
            s.fail("expression", e.what());
        }
        s.optional_number("lower");
        s.optional_number("upper");
        s.boolean("rotation_invariant_last", false);
    }
    s.finish();
    return s.out;
}

Json read_points(const ConfigSource& src, const std::string& ptr, const Json& v, const Json& pair) {
    auto fail = [&](const std::string& p, const std::string& what) {
        throw SchemaError(src.name + ":" + std::to_string(src.line_of(p)) + ": " + p + ": " + what);
    };
    if (pair.is_null()) fail(ptr, "points need a pair");
    if (!v.is_array() || v.empty()) fail(ptr, "expected a nonempty array of points");
    const std::size_t n = pair_dim(pair);
    const DomainPair built = build_pair(pair);
    Json out = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string pi = ptr + "/" + std::to_string(i);
        const Json& p = v[i];
        if (!p.is_array()) fail(pi, "a point is an array of coordinates");
        if (p.size() != n) fail(pi, "expected " + std::to_string(n) + " coordinate(s), got " + std::to_string(p.size()));
        Json q = Json::array();
        Point x;
        for (std::size_t c = 0; c < n; ++c) {
            const Json& z = p[c];
            const std::string pc = pi + "/" + std::to_string(c);
            if (z.is_number()) {
                x.emplace_back(z.get<double>(), 0.0);
            } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
                x.emplace_back(z[0].get<double>(), z[1].get<double>());
            } else {
                fail(pc, "a coordinate is a number or [re, im]");
            }
            q.push_back({x.back().real(), x.back().imag()});
        }
        if (!built.outer.contains(x)) fail(pi, "point lies outside X");
        out.push_back(q);
    }
    return out;
}

Json read_families(const ConfigSource& src, const std::string& ptr, const Json& v) {
    auto fail = [&](const std::string& p, const std::string& what) {
        throw SchemaError(src.name + ":" + std::to_string(src.line_of(p)) + ": " + p + ": " + what);
    };
    if (v.is_string() && v == "default") return v;
    if (!v.is_array() || v.empty()) fail(ptr, "expected \"default\" or a nonempty array of family names");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string pi = ptr + "/" + std::to_string(i);
        if (!v[i].is_string()) fail(pi, "expected a family name");
        try {
            parse_family(v[i].get<std::string>());
        } catch (const ConfigError& e) {
            fail(pi, e.what());
        }
    }
    return v;
}

Json read_oracle(Section s, const Json& pair, const Json& obstacle) {
    const std::string type = s.string("type", std::nullopt, {"none", "closed_form", "grid", "kiselman"});
    if (type == "closed_form") {
        const std::string src = s.string("expression", std::nullopt);
        try {
            Expression(src, coordinate_names(pair.is_null() ? 1 : pair_dim(pair)));
        } catch (const ConfigError& e) {
            s.fail("expression", e.what());
        }
    } else if (type == "grid") {
        if (!pair.is_null() && pair_dim(pair) != 1) s.fail("type", "the grid oracle needs a planar pair");
        s.number("spacing", 1.0 / 64.0, 0.0, 1.0, true);
        s.optional_number("half_width");
        s.number("tolerance", 1e-10, 0.0, 1.0, true);
        s.integer("max_sweeps", 200000, 1);
        s.boolean("richardson", false);
        const Json* caps = s.get("caps");
        Json c = Json::array();
        if (caps) {
            if (!caps->is_array()) s.fail("caps", "expected an array of numbers");
            for (std::size_t i = 0; i < caps->size(); ++i) {
                if (!(*caps)[i].is_number()) s.fail_at(s.at("caps") + "/" + std::to_string(i), "expected a number");
                if (i > 0 && !((*caps)[i].get<double>() > (*caps)[i - 1].get<double>()))
                    s.fail_at(s.at("caps") + "/" + std::to_string(i), "caps must increase");
                c.push_back((*caps)[i]);
            }
        }
        s.out["caps"] = c;
    } else if (type == "kiselman") {
        if (!pair.is_null() && pair["type"] != "hartogs") s.fail("type", "the Kiselman oracle needs a hartogs pair");
        if (!obstacle.is_null() && !pair.is_null() && !build_obstacle(obstacle, pair).rotation_invariant_last)
            s.fail("type", "the Kiselman oracle needs an obstacle invariant under rotation of z_n");
        s.integer("resolution", 2000, 16);
    }
    s.finish();
    return s.out;
}

Json read_tolerances(Section s) {
    s.number("gap", 2e-2, 0.0);
    s.number("centre", 1e-10, 0.0);
    s.number("modulus", 1e-8, 0.0);
    s.number("cesaro", 1e-3, 0.0);
    s.finish();
    return s.out;
}

void expressions(Section& s, const std::string& key, std::size_t count, const std::vector<std::string>& vars) {
    const auto xs = s.strings(key, true);
    if (count && xs.size() != count)
        s.fail(key, "expected " + std::to_string(count) + " component expression(s), got " + std::to_string(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        try {
            Expression(xs[i], vars);
        } catch (const ConfigError& e) {
            s.fail_at(s.at(key) + "/" + std::to_string(i), e.what());
        }
    }
}

Json read_homotopy(Section s, const Json& pair) {
    expressions(s, "disc", pair.is_null() ? 0 : pair_dim(pair), {"zeta"});
    const auto m = s.integer("samples", 256, 8, 1 << 20);
    if (!is_power_of_two(std::size_t(m))) s.fail("samples", "must be a power of two");
    s.integer("steps", 32, 1, 100000);
    s.finish();
    return s.out;
}

Json read_cesaro(Section s) {
    expressions(s, "loop", 0, {"zeta", "w"});
    const auto mw = s.integer("w_samples", 2048, 8, 1 << 16);
    const auto mz = s.integer("z_samples", 32, 8, 1 << 12);
    if (!is_power_of_two(std::size_t(mw))) s.fail("w_samples", "must be a power of two");
    if (!is_power_of_two(std::size_t(mz))) s.fail("z_samples", "must be a power of two");
    const Json* orders = s.get("orders");
    Json o = Json::array({8, 16, 32, 64, 128, 256});
    if (orders) {
        if (!orders->is_array() || orders->size() < 2) s.fail("orders", "expected at least two increasing orders");
        o = Json::array();
        for (std::size_t i = 0; i < orders->size(); ++i) {
            const Json& v = (*orders)[i];
            const std::string pi = s.at("orders") + "/" + std::to_string(i);
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0) s.fail_at(pi, "expected a nonnegative integer");
            if (i > 0 && !(v.get<std::int64_t>() > o.back().get<std::int64_t>())) s.fail_at(pi, "orders must increase");
            if (4 * v.get<std::int64_t>() + 4 > mw) s.fail_at(pi, "order needs w_samples >= 4j + 4");
            o.push_back(v);
        }
    } else if (4 * 256 + 4 > mw) {
        s.fail("w_samples", "default orders up to 256 need w_samples >= 1028");
    }
    s.out["orders"] = o;
    s.finish();
    return s.out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ConfigSource parse_config(const std::string& text, const std::string& name) {
    ConfigSource src;
    src.name = name;
    const char* cursor = text.data();
    struct Frame {
        std::string ptr;
        bool array;
        std::size_t index = 0;
        std::string key;
    };
    std::vector<Frame> stack;
    auto line_now = [&] { return line_at(text, static_cast<std::size_t>(cursor - text.data()) - 1); };
    auto child_ptr = [&]() -> std::string {
        if (stack.empty()) return "";
        const Frame& f = stack.back();
        return f.ptr + "/" + (f.array ? std::to_string(f.index) : escape_token(f.key));
    };
    auto cb = [&](int, Json::parse_event_t ev, Json& parsed) {
        switch (ev) {
            case Json::parse_event_t::object_start:
            case Json::parse_event_t::array_start: {
                const std::string p = child_ptr();
                src.lines.emplace(p, line_now());
                stack.push_back({p, ev == Json::parse_event_t::array_start, 0, {}});
                break;
            }
            case Json::parse_event_t::object_end:
            case Json::parse_event_t::array_end:
                stack.pop_back();
                if (!stack.empty() && stack.back().array) ++stack.back().index;
                break;
            case Json::parse_event_t::key:
                stack.back().key = parsed.get<std::string>();
                src.lines[child_ptr()] = line_now();
                break;
            case Json::parse_event_t::value:
                if (!stack.empty() && stack.back().array) {
                    src.lines[child_ptr()] = line_now();
                    ++stack.back().index;
                }
                break;
        }
        return true;
    };
    try {
        src.doc = Json::parse(CountingIterator(text.data(), &cursor),
                              CountingIterator(text.data() + text.size(), &cursor), cb);
    } catch (const Json::parse_error& e) {
        throw SchemaError(name + ":" + std::to_string(line_at(text, e.byte > 0 ? e.byte - 1 : 0)) +
                          ": invalid JSON: " + e.what());
    }
    return src;
}

ConfigSource load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ":1: cannot read the config file");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text, path);
}

Json effective_config(const ConfigSource& src, Command command) {
    Section root(src, "", src.doc);
    root.string("experiment", std::nullopt);
    root.integer("seed", 1, 0);
    root.string("output", "out");
    const auto m = root.integer("quadrature", 512, 8, 1 << 20);
    if (!is_power_of_two(std::size_t(m))) root.fail("quadrature", "must be a power of two");
    root.integer("starts", 8, 1, 10000);
    root.integer("budget", 2000, 10);
    root.number("penalty_weight", 1e4, 0.0, INFINITY, true);

    const bool pointwise = command == Command::Envelope || command == Command::Oracle || command == Command::Compare;
    Json pair = nullptr;
    if (root.has("pair") || pointwise || command == Command::Homotopy) {
        pair = read_pair(root.sub("pair"));
        root.out["pair"] = pair;
    }
    Json obstacle = nullptr;
    if (root.has("obstacle") || pointwise) {
        obstacle = read_obstacle(root.sub("obstacle"), pair);
        root.out["obstacle"] = obstacle;
    }
    if (root.has("points") || pointwise) root.out["points"] = read_points(src, root.at("points"), root.require("points"), pair);
    if (const Json* f = root.get("families")) {
        root.out["families"] = read_families(src, root.at("families"), *f);
    } else {
        root.out["families"] = "default";
    }
    if (root.has("oracle") || command == Command::Oracle || command == Command::Compare) {
        root.out["oracle"] = read_oracle(root.sub("oracle"), pair, obstacle);
        if (command != Command::Envelope && root.out["oracle"]["type"] == "none")
            root.fail("oracle", std::string("the ") + command_name(command) + " command needs an oracle");
    } else {
        root.out["oracle"] = {{"type", "none"}};
    }
    if (root.has("tolerances")) {
        root.out["tolerances"] = read_tolerances(root.sub("tolerances"));
    } else {
        root.out["tolerances"] = read_tolerances(Section(src, "/tolerances", Json::object()));
    }
    if (root.has("homotopy") || command == Command::Homotopy) {
        if (command == Command::Homotopy && pair["type"] != "hartogs")
            root.fail("pair", "the homotopy command needs a hartogs pair");
        root.out["homotopy"] = read_homotopy(root.sub("homotopy"), pair);
    }
    if (root.has("cesaro") || command == Command::Cesaro) root.out["cesaro"] = read_cesaro(root.sub("cesaro"));
    root.finish();
    return root.out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace {

std::function<double(PointView)> radius_fn(const Json& source, std::size_t base_dim) {
    if (source.is_number()) {
        const double r = source.get<double>();
        return [r](PointView) { return r; };
    }
    const Expression e(source.get<std::string>(), coordinate_names(base_dim));
    return [e](PointView p) { return e.real(p); };
}

double bound(const Json& obstacle, const char* key, double def) {
    return obstacle.contains(key) && !obstacle[key].is_null() ? obstacle[key].get<double>() : def;
}

CounterexampleParams counterexample_params(const Json& pair) {
    CounterexampleParams p;
    p.delta = pair["delta"];
    p.tube_radius = pair["tube_radius"];
    p.rho_u = pair["rho_u"];
    p.eps_moll = pair["eps_moll"];
    return p;
}

}  // namespace

HartogsPair build_hartogs(const Json& pair) {
    if (pair["type"] != "hartogs") throw ConfigError("pair is not a hartogs pair");
    const std::size_t base_dim = pair["base_dim"];
    return make_hartogs_pair(ball(pair["base_radius"].get<double>(), base_dim), radius_fn(pair["r"], base_dim),
                             radius_fn(pair["R"], base_dim));
}

DomainPair build_pair(const Json& pair) {
    const std::string t = pair["type"];
    if (t == "planar_annulus") return planar_annulus_pair();
    if (t == "ball") return ball_pair(pair["radius"].get<double>(), pair["dim"].get<std::size_t>());
    if (t == "shell") return shell_pair(pair["dim"].get<std::size_t>());
    if (t == "hartogs") return hartogs_domain_pair(build_hartogs(pair));
    return counterexample_pair(counterexample_params(pair)).pair;
}

Obstacle build_obstacle(const Json& obstacle, const Json& pair) {
    if (obstacle.contains("expression")) {
        const Expression e(obstacle["expression"].get<std::string>(), coordinate_names(pair_dim(pair)));
        return Obstacle{[e](PointView p) { return e.real(p); }, obstacle["rotation_invariant_last"].get<bool>(),
                        bound(obstacle, "lower", -INFINITY), bound(obstacle, "upper", INFINITY), e.source()};
    }
    const std::string name = obstacle["builtin"];
    if (name == "counterexample") return counterexample_pair(counterexample_params(pair)).phi;
    if (name == "constant") return obstacles::constant(obstacle["value"].get<double>());
    const double lo = bound(obstacle, "lower", -INFINITY), hi = bound(obstacle, "upper", INFINITY);
    if (name == "log_abs_last") return obstacles::log_abs_last(lo, hi);
    if (name == "neg_log_abs_last") return obstacles::neg_log_abs_last(lo, hi);
    if (name == "real_first") return obstacles::real_first(lo, hi);
    if (name == "real_first_plus_last_squared") return obstacles::real_first_plus_last_squared(lo, hi);
    return obstacles::norm_squared(lo, hi);
}

std::vector<Point> build_points(const Json& points) {
    std::vector<Point> out;
    for (const auto& p : points) {
        Point x;
        for (const auto& z : p) x.emplace_back(z[0].get<double>(), z[1].get<double>());
        out.push_back(std::move(x));
    }
    return out;
}

DiscFamily parse_family(const std::string& tag) {
    if (tag == "constant") return DiscFamily::constant();
    if (tag == "shell") return DiscFamily::shell();
    for (const char* prefix : {"polynomial", "blaschke", "vertical"}) {
        const std::string pre(prefix);
        if (tag.rfind(pre, 0) != 0) continue;
        const std::string digits = tag.substr(pre.size());
        if (digits.empty() || digits.size() > 2 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) break;
        const std::size_t k = std::stoul(digits);
        if (k == 0) throw ConfigError("family \"" + tag + "\": degree must be at least 1");
        if (pre == "polynomial") return DiscFamily::polynomial(k);
        if (pre == "blaschke") return DiscFamily::blaschke(k);
        return DiscFamily::vertical(k);
    }
    throw ConfigError("unknown family \"" + tag +
                      "\" (expected constant, shell, polynomialK, blaschkeK or verticalK)");
}

std::vector<DiscFamily> build_families(const Json& families, const DomainPair& pair, PointView centre) {
    if (families.is_string()) return default_families(pair, centre);
    std::vector<DiscFamily> out;
    for (const auto& f : families) out.push_back(parse_family(f.get<std::string>()));
    return out;
}

Json point_to_json(PointView p) {
    Json out = Json::array();
    for (const auto& z : p) out.push_back({z.real(), z.imag()});
    return out;
}

}  // namespace discenv::cli
