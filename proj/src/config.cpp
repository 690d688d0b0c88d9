#include "lspde/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lspde/errors.hpp"
#include "lspde/text.hpp"

namespace lspde {

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::set<std::string>& required,
                  const std::string& where)
{
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
    for (const auto& k : required)
        if (!j.contains(k)) throw ConfigError(where + ": missing key '" + k + "'");
}

double real_of(const json& j, const std::string& where)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        if (auto v = parse_real(j.get<std::string>())) return *v;
    }
    throw ConfigError(where + ": expected a real number");
}

json real_to_json(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::vector<double> reals_of(const json& j, const std::string& where)
{
    if (!j.is_array()) throw ConfigError(where + ": expected an array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(real_of(v, where));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_real_or_throw(const std::string& s, const std::string& where)
{
    if (auto v = parse_real(s)) return *v;
    throw ConfigError(where + ": '" + s + "' is not a real number");
}

}  // namespace

json load_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

LevyTriplet triplet_from_json(const json& j)
{
    require_keys(j, {"a", "gamma", "nu"}, {}, "triplet");
    LevyTriplet t;
    if (j.contains("a")) t.a = real_of(j["a"], "triplet.a");
    if (j.contains("gamma")) t.gamma = real_of(j["gamma"], "triplet.gamma");
    std::vector<Atom> atoms;
    std::vector<DensityPiece> pieces;
    if (j.contains("nu")) {
        if (!j["nu"].is_array()) throw ConfigError("triplet.nu: expected an array");
        for (const auto& item : j["nu"]) {
            require_keys(item, {"atom", "density"}, {}, "triplet.nu[]");
            if (item.size() != 1) throw ConfigError("triplet.nu[]: exactly one of 'atom' or 'density'");
            if (item.contains("atom")) {
                const auto xw = reals_of(item["atom"], "atom");
                if (xw.size() != 2) throw ConfigError("atom: expected [location, weight]");
                atoms.push_back({xw[0], xw[1]});
                continue;
            }
            const json& d = item["density"];
            if (!d.is_object() || !d.contains("kind")) throw ConfigError("density: missing 'kind'");
            const std::string kind = d["kind"].get<std::string>();
            if (kind == "power") {
                require_keys(d, {"kind", "coeff", "exponent", "lo", "hi"}, {"exponent", "lo", "hi"}, "density");
                PowerDensity p;
                p.coeff = d.contains("coeff") ? real_of(d["coeff"], "coeff") : 1.0;
                p.exponent = real_of(d["exponent"], "exponent");
                p.lo = real_of(d["lo"], "lo");
                p.hi = real_of(d["hi"], "hi");
                pieces.emplace_back(p);
            } else if (kind == "tabulated") {
                require_keys(d, {"kind", "x", "y"}, {"x", "y"}, "density");
                pieces.emplace_back(TabulatedDensity{reals_of(d["x"], "x"), reals_of(d["y"], "y")});
            } else {
                throw ConfigError("density: unknown kind '" + kind + "'");
            }
        }
    }
    t.nu = LevyMeasure(std::move(atoms), std::move(pieces));
    t.validate();
    return t;
}

json triplet_to_json(const LevyTriplet& t)
{
    json nu = json::array();
    for (const Atom& a : t.nu.atoms()) nu.push_back({{"atom", {a.location, a.weight}}});
    for (const DensityPiece& d : t.nu.densities()) {
        if (const auto* p = std::get_if<PowerDensity>(&d.spec())) {
            nu.push_back({{"density",
                           {{"kind", "power"},
                            {"coeff", p->coeff},
                            {"exponent", p->exponent},
                            {"lo", real_to_json(p->lo)},
                            {"hi", real_to_json(p->hi)}}}});
        } else {
            const auto& tab = std::get<TabulatedDensity>(d.spec());
            nu.push_back({{"density", {{"kind", "tabulated"}, {"x", tab.x}, {"y", tab.y}}}});
        }
    }
    return {{"a", t.a}, {"gamma", t.gamma}, {"nu", nu}};
}

MultiPoly poly_from_json(const json& j)
{
    if (j.is_object() && j.contains("helmholtz")) {
        require_keys(j, {"helmholtz"}, {}, "poly");
        const json& h = j["helmholtz"];
        require_keys(h, {"dim", "lambda", "power"}, {"dim", "lambda"}, "poly.helmholtz");
        const int power = h.contains("power") ? h["power"].get<int>() : 1;
        if (power < 0) throw ConfigError("poly.helmholtz.power must be >= 0");
        return MultiPoly::helmholtz(h["dim"].get<int>(), real_of(h["lambda"], "lambda")).pow(power);
    }
    require_keys(j, {"dim", "terms"}, {"dim", "terms"}, "poly");
    const int dim = j["dim"].get<int>();
    if (!j["terms"].is_array()) throw ConfigError("poly.terms: expected an array");
    std::map<MultiIndex, double> terms;
    for (const auto& t : j["terms"]) {
        require_keys(t, {"alpha", "coeff"}, {"alpha", "coeff"}, "poly.terms[]");
        const MultiIndex alpha = t["alpha"].get<MultiIndex>();
        for (int a : alpha)
            if (a < 0) throw ConfigError("poly.terms[].alpha entries must be >= 0");
        terms[alpha] += real_of(t["coeff"], "coeff");
    }
    return MultiPoly(dim, terms);
}

json poly_to_json(const MultiPoly& p)
{
    json terms = json::array();
    for (const auto& [alpha, c] : p.terms()) terms.push_back({{"alpha", alpha}, {"coeff", c}});
    return {{"dim", p.dim()}, {"terms", terms}};
}

Grid parse_grid_spec(const std::string& spec)
{
    const auto parts = split(spec, ':');
    if (parts.size() != 2) throw ConfigError("grid spec '" + spec + "': expected <n1>x..:<L1>x..");
    std::vector<int> shape;
    for (const auto& s : split(parts[0], 'x')) {
        try {
            std::size_t used = 0;
            shape.push_back(std::stoi(s, &used));
            if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw ConfigError("grid spec '" + spec + "': bad point count '" + s + "'");
        }
    }
    std::vector<double> box;
    for (const auto& s : split(parts[1], 'x')) box.push_back(parse_real_or_throw(s, "grid spec"));
    if (box.size() == 1) box.assign(shape.size(), box.front());
    if (box.size() != shape.size()) throw ConfigError("grid spec '" + spec + "': shape and box ranks differ");
    return Grid(shape, box);
}

std::string grid_spec(const Grid& g)
{
    std::string s;
    for (int j = 0; j < g.dim(); ++j) s += (j ? "x" : "") + std::to_string(g.shape()[j]);
    s += ':';
    for (int j = 0; j < g.dim(); ++j) s += (j ? "x" : "") + format_real(g.box()[j]);
    return s;
}

WeightFunction parse_weight(const std::string& spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("weight '" + spec + "': expected <kind>:<value>");
    const std::string kind = spec.substr(0, colon);
    const double v = parse_real_or_throw(spec.substr(colon + 1), "weight");
    if (kind == "logpower") return WeightFunction(LogPower{v});
    if (kind == "powerbeta") return WeightFunction(PowerBeta{v});
    throw ConfigError("weight: unknown kind '" + kind + "'");
}

Nonlinearity parse_nonlinearity(const std::string& spec, double c)
{
    if (spec == "builtin:sin") return Nonlinearity::sine(c);
    if (spec == "builtin:tanh") return Nonlinearity::tanh(c);
    if (spec == "builtin:constant") return Nonlinearity::constant(c);
    if (spec == "builtin:zero") return Nonlinearity::zero();
    const std::string prefix = "tabulated:";
    if (spec.rfind(prefix, 0) == 0) {
        const json j = load_json(spec.substr(prefix.size()));
        require_keys(j, {"y", "g"}, {"y", "g"}, "tabulated nonlinearity");
        return Nonlinearity::tabulated(reals_of(j["y"], "y"), reals_of(j["g"], "g"), c);
    }
    throw ConfigError("unknown nonlinearity '" + spec + "'");
}

std::vector<double> parse_real_list(const std::string& s)
{
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_real_or_throw(part, "list"));
    return out;
}

}  // namespace lspde
