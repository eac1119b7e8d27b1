#include "solab/loader.hpp"

#include "solab/catalog.hpp"
#include "solab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace solab {

namespace {

struct Value {
    enum class Kind { String, Number, Bool, Array } kind = Kind::String;
    std::string text;  // string contents, or the number as written
    double number = 0.0;
    bool flag = false;
    std::vector<Value> items;
    SourceLoc loc;  // strings: first character inside the quotes
};

struct Entry {
    std::string key;
    SourceLoc key_loc;
    Value value;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

std::string prefix(const SourceLoc& l) {
    return l.file + ":" + std::to_string(l.line) + ":" + std::to_string(l.column) + ": ";
}

[[noreturn]] void fail_at(const SourceLoc& l, const std::string& message) { throw InputError(prefix(l) + message); }

class Reader {
public:
    Reader(const std::string& text, std::string file) : s_(text), file_(std::move(file)) {}

    Table parse() {
        Table t;
        std::string section;
        while (true) {
            skip_blank_lines();
            if (eof()) break;
            const SourceLoc at = here();
            if (peek() == '[') {
                get();
                skip_inline_space();
                section = identifier();
                skip_inline_space();
                expect(']');
                end_of_line();
                if (!known_section(section)) fail_at(at, "unknown section [" + section + "]");
                if (t.count(section)) fail_at(at, "section [" + section + "] appears twice");
                t[section];
                continue;
            }
            if (section.empty()) fail_at(at, "key outside a section");
            Entry e;
            e.key_loc = at;
            e.key = identifier();
            skip_inline_space();
            expect('=');
            skip_inline_space();
            e.value = value();
            end_of_line();
            auto& sec = t[section];
            if (sec.count(e.key)) fail_at(at, "duplicate key '" + e.key + "' in [" + section + "]");
            sec.emplace(e.key, std::move(e));
        }
        return t;
    }

private:
    static bool known_section(const std::string& s) {
        static const std::set<std::string> names{"manifold", "metric", "potential", "soliton",
                                                 "connection", "vaisman", "immersion", "sample"};
        return names.count(s) > 0;
    }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[pos_]; }
    char get() {
        const char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    SourceLoc here() const { return SourceLoc{file_, line_, col_}; }

    void expect(char c) {
        if (peek() != c) {
            const std::string got = eof() ? std::string("end of file") : std::string("'") + peek() + "'";
            fail_at(here(), std::string("expected '") + c + "', found " + got);
        }
        get();
    }
    void skip_inline_space() {
        while (peek() == ' ' || peek() == '\t' || peek() == '\r') get();
    }
    void skip_comment() {
        if (peek() == '#')
            while (!eof() && peek() != '\n') get();
    }
    void skip_blank_lines() {
        while (!eof()) {
            skip_inline_space();
            skip_comment();
            if (peek() != '\n') return;
            get();
        }
    }
    void end_of_line() {
        skip_inline_space();
        skip_comment();
        if (!eof() && peek() != '\n') fail_at(here(), std::string("unexpected '") + peek() + "' after value");
    }
    // Inside arrays newlines and comments are whitespace.
    void skip_any_space() {
        while (!eof()) {
            skip_inline_space();
            skip_comment();
            if (peek() != '\n') return;
            get();
        }
    }

    std::string identifier() {
        const SourceLoc at = here();
        std::string out;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) out += get();
        if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) fail_at(at, "expected a name");
        return out;
    }

    Value value() {
        const SourceLoc at = here();
        const char c = peek();
        if (c == '"') return string_value();
        if (c == '[') {
            get();
            Value v;
            v.kind = Value::Kind::Array;
            v.loc = at;
            skip_any_space();
            while (peek() != ']') {
                v.items.push_back(value());
                skip_any_space();
                if (peek() == ',') {
                    get();
                    skip_any_space();
                } else if (peek() != ']') {
                    fail_at(here(), "expected ',' or ']' in array");
                }
            }
            get();
            return v;
        }
        std::string word;
        while (!eof() && std::string(" \t\r\n,]#").find(peek()) == std::string::npos) word += get();
        Value v;
        v.loc = at;
        if (word == "true" || word == "false") {
            v.kind = Value::Kind::Bool;
            v.flag = word == "true";
            return v;
        }
        if (word.empty()) fail_at(at, "expected a value");
        char* end = nullptr;
        v.number = std::strtod(word.c_str(), &end);
        if (end == word.c_str() || *end != '\0' || !std::isfinite(v.number))
            fail_at(at, "expected a value, found '" + word + "' (expressions must be quoted)");
        v.kind = Value::Kind::Number;
        v.text = word;
        return v;
    }

    Value string_value() {
        const SourceLoc open = here();
        get();
        Value v;
        v.kind = Value::Kind::String;
        v.loc = here();
        while (true) {
            if (eof() || peek() == '\n') fail_at(open, "unterminated string");
            const char c = get();
            if (c == '"') break;
            if (c == '\\') {
                if (eof()) fail_at(open, "unterminated string");
                const char e = get();
                if (e == '"' || e == '\\') {
                    v.text += e;
                } else {
                    fail_at(open, std::string("unknown escape '\\") + e + "'");
                }
                continue;
            }
            v.text += c;
        }
        return v;
    }

    const std::string& s_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------------------------

/// Typed access to one section; every key must be consumed.
class Section {
public:
    Section(std::string name, std::map<std::string, Entry>* entries) : name_(std::move(name)), entries_(entries) {}

    bool present() const { return entries_ != nullptr; }
    bool has(const std::string& key) const { return entries_ && entries_->count(key); }
    const Entry& at(const std::string& key) {
        used_.insert(key);
        return entries_->at(key);
    }
    std::string path(const std::string& key) const { return name_ + "." + key; }

    void finish() const {
        if (!entries_) return;
        for (const auto& [k, e] : *entries_)
            if (!used_.count(k)) fail_at(e.key_loc, "unknown key '" + k + "' in [" + name_ + "]");
    }

private:
    std::string name_;
    std::map<std::string, Entry>* entries_;
    std::set<std::string> used_;
};

const char* kind_name(Value::Kind k) {
    switch (k) {
    case Value::Kind::String: return "a string";
    case Value::Kind::Number: return "a number";
    case Value::Kind::Bool: return "true or false";
    case Value::Kind::Array: return "an array";
    }
    return "?";
}

void want(const Value& v, Value::Kind k, const std::string& path) {
    if (v.kind != k) fail_at(v.loc, path + ": expected " + kind_name(k) + ", found " + kind_name(v.kind));
}

double number(const Value& v, const std::string& path) {
    want(v, Value::Kind::Number, path);
    return v.number;
}

std::string string(const Value& v, const std::string& path) {
    want(v, Value::Kind::String, path);
    return v.text;
}

/// Expressions are strings; plain numbers are accepted and kept as written.
std::string expression(const Value& v, const std::string& path, GeometrySpec& spec) {
    if (v.kind == Value::Kind::Number) {
        spec.locations[path] = v.loc;
        return v.text;
    }
    want(v, Value::Kind::String, path);
    spec.locations[path] = v.loc;
    return v.text;
}

std::vector<std::string> expression_list(const Value& v, const std::string& path, GeometrySpec& spec) {
    want(v, Value::Kind::Array, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.items.size(); ++i)
        out.push_back(expression(v.items[i], path + "[" + std::to_string(i) + "]", spec));
    return out;
}

/// n x n from nested rows; rows may be full or the upper triangle (row i holds columns i..n-1).
std::vector<std::string> square(const Value& v, const std::string& path, std::size_t n, GeometrySpec& spec,
                                bool symmetric) {
    want(v, Value::Kind::Array, path);
    if (v.items.size() != n)
        fail_at(v.loc, path + ": expected " + std::to_string(n) + " rows, got " + std::to_string(v.items.size()));
    std::vector<std::string> out(n * n);
    std::vector<bool> set(n * n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Value& row = v.items[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        want(row, Value::Kind::Array, rp);
        const bool upper = symmetric && row.items.size() == n - i && i > 0;
        if (!upper && row.items.size() != n)
            fail_at(row.loc, rp + ": expected " + std::to_string(n) + " entries" +
                                 (symmetric ? " (or " + std::to_string(n - i) + " for the upper triangle)" : ""));
        for (std::size_t k = 0; k < row.items.size(); ++k) {
            const std::size_t j = upper ? i + k : k;
            const std::string ep = path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            out[i * n + j] = expression(row.items[k], ep, spec);
            set[i * n + j] = true;
        }
    }
    if (symmetric) {
        const auto squeeze = [](std::string s) {
            s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
            return s;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::string up = path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
                const std::string lo = path + "[" + std::to_string(j) + "][" + std::to_string(i) + "]";
                if (!set[j * n + i]) {
                    out[j * n + i] = out[i * n + j];
                    spec.locations[lo] = spec.locations[up];
                } else if (squeeze(out[j * n + i]) != squeeze(out[i * n + j])) {
                    fail_at(spec.locations[lo], path + ": entries [" + std::to_string(i) + "][" + std::to_string(j) +
                                                    "] and [" + std::to_string(j) + "][" + std::to_string(i) +
                                                    "] differ; write the upper triangle only");
                }
            }
    }
    return out;
}

/// n^3 coefficients, nested [k][i][j] or flat.
std::vector<std::string> cube(const Value& v, const std::string& path, std::size_t n, GeometrySpec& spec) {
    want(v, Value::Kind::Array, path);
    std::vector<std::string> out;
    const bool nested = !v.items.empty() && v.items[0].kind == Value::Kind::Array;
    if (!nested) {
        if (v.items.size() != n * n * n)
            fail_at(v.loc, path + ": expected " + std::to_string(n * n * n) + " components, got " +
                               std::to_string(v.items.size()));
        for (std::size_t f = 0; f < v.items.size(); ++f) {
            const std::size_t k = f / (n * n), i = (f / n) % n, j = f % n;
            out.push_back(expression(v.items[f],
                                     path + "[" + std::to_string(k) + "][" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                     spec));
        }
        return out;
    }
    if (v.items.size() != n) fail_at(v.loc, path + ": expected " + std::to_string(n) + " blocks");
    for (std::size_t k = 0; k < n; ++k) {
        const auto block = square(v.items[k], path + "[" + std::to_string(k) + "]", n, spec, false);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

std::pair<double, double> interval(const Value& v, const std::string& path) {
    want(v, Value::Kind::Array, path);
    if (v.items.size() != 2) fail_at(v.loc, path + ": expected [lo, hi]");
    return {number(v.items[0], path), number(v.items[1], path)};
}

std::string file_stem(const std::string& path) {
    std::string s = path;
    const auto slash = s.find_last_of('/');
    if (slash != std::string::npos) s = s.substr(slash + 1);
    const auto dot = s.find_last_of('.');
    if (dot != std::string::npos && dot > 0) s = s.substr(0, dot);
    return s;
}

} // namespace

GeometrySpec parse_geometry(const std::string& text, const std::string& filename) {
    Table table = Reader(text, filename).parse();
    const auto section = [&](const std::string& name) {
        const auto it = table.find(name);
        return Section(name, it == table.end() ? nullptr : &it->second);
    };
    Section manifold = section("manifold"), metric = section("metric"), potential = section("potential"),
            soliton = section("soliton"), connection = section("connection"), vaisman = section("vaisman"),
            immersion = section("immersion"), sample = section("sample");

    GeometrySpec spec;
    bool inherited = false;
    if (manifold.has("extends")) {
        const Entry& e = manifold.at("extends");
        const std::string inv = string(e.value, "manifold.extends");
        try {
            spec = catalog_get(inv).spec;
        } catch (const UnknownEntry& err) {
            fail_at(e.value.loc, std::string("manifold.extends: ") + err.what());
        } catch (const ParamOutOfRange& err) {
            fail_at(e.value.loc, std::string("manifold.extends: ") + err.what());
        } catch (const InputError& err) {
            fail_at(e.value.loc, std::string("manifold.extends: ") + err.what());
        }
        inherited = true;
    }
    // Expected values describe the catalog geometry; they survive only sample and name changes.
    const bool redefines = metric.present() || potential.present() || soliton.present() || connection.present() ||
                           vaisman.present() || immersion.present() || manifold.has("coords");
    if (inherited && redefines) {
        spec.expected.clear();
        spec.claims.clear();
        spec.checks.clear();
    }

    spec.name = manifold.has("name") ? string(manifold.at("name").value, "manifold.name")
                                     : (inherited ? spec.name : file_stem(filename));
    if (manifold.has("coords")) {
        const Entry& e = manifold.at("coords");
        want(e.value, Value::Kind::Array, "manifold.coords");
        spec.coords.clear();
        for (const Value& c : e.value.items) spec.coords.push_back(string(c, "manifold.coords"));
        spec.locations["manifold.coords"] = e.value.loc;
    }
    if (spec.coords.empty()) throw InputError(filename + ": coords required");
    const std::size_t n = spec.coords.size();

    if (metric.has("g")) {
        spec.metric = square(metric.at("g").value, "metric.g", n, spec, true);
        spec.immersion.reset();
    }
    if (potential.has("f")) {
        spec.potential = expression(potential.at("f").value, "potential.f", spec);
        spec.vector_field.reset();
    }
    if (soliton.has("lambda")) spec.lambda = number(soliton.at("lambda").value, "soliton.lambda");
    if (soliton.has("mu")) spec.mu = number(soliton.at("mu").value, "soliton.mu");
    if (soliton.has("xi")) {
        spec.vector_field = expression_list(soliton.at("xi").value, "soliton.xi", spec);
        if (!potential.has("f")) spec.potential.reset();
    }
    if (soliton.has("eta")) spec.eta = expression_list(soliton.at("eta").value, "soliton.eta", spec);
    if (soliton.has("F")) spec.F = square(soliton.at("F").value, "soliton.F", n, spec, false);

    if (connection.has("kind")) {
        const Entry& e = connection.at("kind");
        try {
            spec.connection = ConnectionSpec{};
            spec.connection.kind = connection_kind_from_string(string(e.value, "connection.kind"));
        } catch (const InputError& err) {
            fail_at(e.value.loc, err.what());
        }
    }
    if (connection.has("eta")) spec.connection.eta = expression_list(connection.at("eta").value, "connection.eta", spec);
    if (connection.has("delta")) spec.connection.coefficients = cube(connection.at("delta").value, "connection.delta", n, spec);
    if (connection.has("gamma")) spec.connection.coefficients = cube(connection.at("gamma").value, "connection.gamma", n, spec);

    if (vaisman.present()) {
        VaismanSpec v = spec.vaisman.value_or(VaismanSpec{});
        if (vaisman.has("J")) v.J = square(vaisman.at("J").value, "vaisman.J", n, spec, false);
        if (vaisman.has("u")) v.u = expression_list(vaisman.at("u").value, "vaisman.u", spec);
        spec.vaisman = std::move(v);
    }
    if (immersion.present()) {
        ImmersionSpec im = spec.immersion.value_or(ImmersionSpec{});
        if (immersion.has("X")) im.X = expression_list(immersion.at("X").value, "immersion.X", spec);
        if (immersion.has("orientation")) {
            const Entry& e = immersion.at("orientation");
            const double o = number(e.value, "immersion.orientation");
            if (o != 1.0 && o != -1.0) fail_at(e.value.loc, "immersion.orientation must be 1 or -1");
            im.orientation = static_cast<int>(o);
            spec.locations["immersion.orientation"] = e.value.loc;
        }
        spec.immersion = std::move(im);
        if (!metric.has("g")) spec.metric.clear();
    }

    if (sample.has("points")) {
        const Value& v = sample.at("points").value;
        want(v, Value::Kind::Array, "sample.points");
        spec.points.clear();
        for (const Value& p : v.items) {
            want(p, Value::Kind::Array, "sample.points");
            if (p.items.size() != n)
                fail_at(p.loc, "sample.points: expected " + std::to_string(n) + " coordinates, got " +
                                   std::to_string(p.items.size()));
            std::vector<double> x;
            for (const Value& c : p.items) x.push_back(number(c, "sample.points"));
            spec.points.emplace_back(std::move(x));
        }
    }
    if (sample.has("grid")) {
        const Value& v = sample.at("grid").value;
        try {
            spec.grid = parse_grid(spec.coords, string(v, "sample.grid"));
        } catch (const InputError& err) {
            fail_at(v.loc, std::string("sample.grid: ") + err.what());
        }
    }
    if (sample.has("box")) {
        const Value& v = sample.at("box").value;
        want(v, Value::Kind::Array, "sample.box");
        spec.domain.box.clear();
        for (const Value& iv : v.items) spec.domain.box.push_back(interval(iv, "sample.box"));
        if (!sample.has("grid")) spec.grid.reset();  // an inherited grid would shadow the new box
    }
    if (sample.has("radius")) spec.domain.radius = interval(sample.at("radius").value, "sample.radius");
    if (sample.has("count")) {
        const Value& v = sample.at("count").value;
        const double c = number(v, "sample.count");
        if (c < 1 || c != std::floor(c) || c > 100000) fail_at(v.loc, "sample.count must be a positive integer");
        spec.sample_count = static_cast<std::size_t>(c);
    }

    for (const Section* s : {&manifold, &metric, &potential, &soliton, &connection, &vaisman, &immersion, &sample}) s->finish();
    try {
        compile(spec);
    } catch (const InputError& err) {
        const std::string what = err.what();
        throw InputError(what.rfind(filename + ":", 0) == 0 ? what : filename + ": " + what);
    }
    return spec;
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string number_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string list(const std::vector<std::string>& items) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + quoted(items[i]);
    return s + "]";
}

std::string rows(const std::vector<std::string>& flat, std::size_t n, const std::string& indent) {
    std::string s = "[";
    for (std::size_t i = 0; i < n; ++i) {
        if (i) s += ",\n" + indent;
        s += list(std::vector<std::string>(flat.begin() + static_cast<std::ptrdiff_t>(i * n),
                                           flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
    }
    return s + "]";
}

std::string interval_text(double lo, double hi) { return "[" + number_text(lo) + ", " + number_text(hi) + "]"; }

} // namespace

std::string write_geometry(const GeometrySpec& spec) {
    const std::size_t n = spec.dim();
    std::ostringstream os;
    os << "[manifold]\n";
    if (!spec.name.empty()) os << "name = " << quoted(spec.name) << "\n";
    os << "coords = " << list(spec.coords) << "\n";
    if (!spec.metric.empty()) os << "\n[metric]\ng = " << rows(spec.metric, n, "     ") << "\n";
    if (spec.potential) os << "\n[potential]\nf = " << quoted(*spec.potential) << "\n";
    if (spec.lambda || spec.mu || spec.vector_field || spec.eta || spec.F) {
        os << "\n[soliton]\n";
        if (spec.lambda) os << "lambda = " << number_text(*spec.lambda) << "\n";
        if (spec.mu) os << "mu = " << number_text(*spec.mu) << "\n";
        if (spec.vector_field) os << "xi = " << list(*spec.vector_field) << "\n";
        if (spec.eta) os << "eta = " << list(*spec.eta) << "\n";
        if (spec.F) os << "F = " << rows(*spec.F, n, "     ") << "\n";
    }
    if (spec.connection.kind != ConnectionKind::LeviCivita) {
        os << "\n[connection]\nkind = " << quoted(to_string(spec.connection.kind)) << "\n";
        if (!spec.connection.eta.empty()) os << "eta = " << list(spec.connection.eta) << "\n";
        if (!spec.connection.coefficients.empty())
            os << (spec.connection.kind == ConnectionKind::Explicit ? "gamma" : "delta") << " = "
               << list(spec.connection.coefficients) << "\n";
    }
    if (spec.vaisman) os << "\n[vaisman]\nJ = " << rows(spec.vaisman->J, n, "     ") << "\nu = " << list(spec.vaisman->u) << "\n";
    if (spec.immersion)
        os << "\n[immersion]\nX = " << list(spec.immersion->X) << "\norientation = " << spec.immersion->orientation << "\n";
    os << "\n[sample]\n";
    if (!spec.domain.box.empty()) {
        os << "box = [";
        for (std::size_t i = 0; i < spec.domain.box.size(); ++i)
            os << (i ? ", " : "") << interval_text(spec.domain.box[i].first, spec.domain.box[i].second);
        os << "]\n";
    }
    if (spec.domain.radius) os << "radius = " << interval_text(spec.domain.radius->first, spec.domain.radius->second) << "\n";
    os << "count = " << spec.sample_count << "\n";
    if (spec.grid) {
        std::string g;
        for (std::size_t i = 0; i < spec.grid->size(); ++i) {
            const GridAxis& a = (*spec.grid)[i];
            g += (i ? ", " : "") + spec.coords[i] + "=" + number_text(a.lo) + ":" + number_text(a.hi) + ":" +
                 std::to_string(a.count);
        }
        os << "grid = " << quoted(g) << "\n";
    }
    if (!spec.points.empty()) {
        os << "points = [";
        for (std::size_t k = 0; k < spec.points.size(); ++k) {
            os << (k ? ", " : "") << "[";
            for (std::size_t i = 0; i < spec.points[k].dim(); ++i) os << (i ? ", " : "") << number_text(spec.points[k][i]);
            os << "]";
        }
        os << "]\n";
    }
    return os.str();
}

GeometrySpec load_geometry(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw InputError(path + ": read error");
    return parse_geometry(ss.str(), path);
}

} // namespace solab
