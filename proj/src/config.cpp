#include "thop/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace thop {

namespace {

using nlohmann::json;

double parse_angle(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.rfind("pi:", 0) == 0) {
            try {
                return std::stod(s.substr(3)) * kPi;
            } catch (const std::exception&) {
                throw ConfigError(where + ": bad pi: angle '" + s + "'");
            }
        }
        throw ConfigError(where + ": angles are numbers or 'pi:<x>' strings");
    }
    throw ConfigError(where + ": expected an angle");
}

Complex parse_complex(const json& v, const std::string& where) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return Complex(v[0].get<double>(), v[1].get<double>());
    throw ConfigError(where + ": expected a number or [re, im]");
}

PCMultiplier parse_multiplier(const json& v, const std::string& name) {
    const std::string where = "multiplier '" + name + "'";
    if (v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number()))
        return PCMultiplier::constant(parse_complex(v, where));
    if (!v.is_object()) throw ConfigError(where + ": expected an object or constant");

    if (v.contains("constant"))
        return PCMultiplier::constant(parse_complex(v["constant"], where));

    if (v.contains("indicator")) {
        const auto& arc = v["indicator"];
        if (!arc.is_array() || arc.size() != 2)
            throw ConfigError(where + ": indicator wants [from, to]");
        return PCMultiplier::indicator(parse_angle(arc[0], where), parse_angle(arc[1], where));
    }

    if (v.contains("piecewise_constant")) {
        const auto& pc = v["piecewise_constant"];
        if (!pc.is_object() || !pc.contains("breaks") || !pc.contains("values"))
            throw ConfigError(where + ": piecewise_constant wants breaks and values");
        std::vector<double> breaks;
        std::vector<Complex> values;
        for (const auto& b : pc["breaks"]) breaks.push_back(parse_angle(b, where));
        for (const auto& c : pc["values"]) values.push_back(parse_complex(c, where));
        return PCMultiplier::piecewise_constant(std::move(breaks), std::move(values));
    }

    if (v.contains("sawtooth") && v["sawtooth"].get<bool>())
        return PCMultiplier::sawtooth();

    PCMultiplier out;
    bool touched = false;
    if (v.contains("trig")) {
        std::vector<TrigTerm> terms;
        for (const auto& t : v["trig"]) {
            if (!t.is_object() || !t.contains("k") || !t.contains("c"))
                throw ConfigError(where + ": trig term wants {k, c}");
            terms.push_back({t["k"].get<int>(), parse_complex(t["c"], where)});
        }
        out = PCMultiplier::from_trig(std::move(terms));
        touched = true;
    }
    if (v.contains("pieces")) {
        std::vector<Piece> pieces;
        for (const auto& pj : v["pieces"]) {
            if (!pj.is_object() || !pj.contains("from") || !pj.contains("to"))
                throw ConfigError(where + ": piece wants {from, to, coeffs}");
            Piece p;
            p.alpha = normalize_angle(parse_angle(pj["from"], where));
            const double to = parse_angle(pj["to"], where);
            double len = normalize_angle(to - p.alpha);
            if (len == 0.0) len = kTwoPi;
            p.beta = p.alpha + len;
            PieceTerm term;
            term.freq = pj.value("freq", 0);
            if (pj.contains("coeffs"))
                for (const auto& c : pj["coeffs"]) term.num.push_back(parse_complex(c, where));
            if (!term.num.empty()) p.terms.push_back(std::move(term));
            if (p.beta > kTwoPi + kAngleTol) {
                // split the wrapping arc
                Piece head = p;
                head.beta = kTwoPi;
                Piece tail;
                tail.alpha = 0.0;
                tail.beta = p.beta - kTwoPi;
                for (const auto& t : p.terms)
                    tail.terms.push_back({t.freq, poly_shift(t.num, kTwoPi - p.alpha)});
                tail.den = poly_shift(p.den, kTwoPi - p.alpha);
                pieces.push_back(std::move(head));
                pieces.push_back(std::move(tail));
            } else {
                pieces.push_back(std::move(p));
            }
        }
        PCMultiplier piecewise = PCMultiplier::from_pieces(std::move(pieces));
        out = touched ? add(out, piecewise) : piecewise;
        touched = true;
    }
    if (!touched)
        throw ConfigError(where + ": no recognized multiplier form");
    return out;
}

struct ExprParser {
    const std::map<std::string, PCMultiplier>& mult;
    std::vector<std::pair<std::string, std::string>>* names;

    const PCMultiplier& lookup(const std::string& n, const std::string& where) const {
        auto it = mult.find(n);
        if (it == mult.end())
            throw ConfigError(where + ": undefined multiplier '" + n + "'");
        return it->second;
    }

    Factor parse_factor(const json& v) const {
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "identity") return Factor::identity();
            if (s == "compact") return Factor::compact();
            throw ConfigError("factor: unknown token '" + s + "'");
        }
        if (!v.is_object()) throw ConfigError("factor: expected object or token");
        PCMultiplier a, b;
        std::string an = "0", bn = "0";
        if (v.contains("T")) {
            an = v["T"].get<std::string>();
            a = lookup(an, "factor");
        }
        if (v.contains("H")) {
            bn = v["H"].get<std::string>();
            b = lookup(bn, "factor");
        }
        if (!v.contains("T") && !v.contains("H"))
            throw ConfigError("factor: wants T and/or H");
        if (names) names->push_back({an, bn});
        return Factor::generator(Generator(std::move(a), std::move(b)));
    }

    OperatorExpr parse(const json& v) const {
        OperatorExpr e;
        e.k = 1;
        const json* sum = nullptr;
        if (v.is_object() && v.contains("sum")) sum = &v["sum"];
        else if (v.is_array()) sum = &v;
        if (sum) {
            for (const auto& tj : *sum) {
                ExprTerm term;
                if (!tj.is_object() || !tj.contains("product"))
                    throw ConfigError("expression term wants {weight?, product}");
                if (tj.contains("weight"))
                    term.weight = parse_complex(tj["weight"], "term weight");
                for (const auto& fj : tj["product"]) term.factors.push_back(parse_factor(fj));
                if (term.factors.empty())
                    throw ConfigError("expression term has an empty product");
                e.terms.push_back(std::move(term));
            }
            if (e.terms.empty()) throw ConfigError("expression has no terms");
            return e;
        }
        // shorthand: a single factor
        ExprTerm term;
        term.factors.push_back(parse_factor(v));
        e.terms.push_back(std::move(term));
        return e;
    }
};

}  // namespace

ProblemConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config parse error: ") + err.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");

    ProblemConfig cfg;
    if (root.contains("p")) {
        if (!root["p"].is_number()) throw ConfigError("p must be a number");
        cfg.p = root["p"].get<double>();
    }
    if (!(cfg.p > 1.0) || !std::isfinite(cfg.p))
        throw ConfigError("p must lie in (1, inf)");

    if (root.contains("multipliers")) {
        if (!root["multipliers"].is_object())
            throw ConfigError("multipliers must be an object");
        for (const auto& [name, v] : root["multipliers"].items())
            cfg.multipliers.emplace(name, parse_multiplier(v, name));
    }

    if (!root.contains("expression")) throw ConfigError("missing expression");
    ExprParser ep{cfg.multipliers, &cfg.generator_names};
    cfg.expr = ep.parse(root["expression"]);

    if (root.contains("grid")) {
        const auto& g = root["grid"];
        if (g.contains("t")) cfg.grid.t_per_segment = g["t"].get<int>();
        if (g.contains("lambda")) cfg.grid.lambda_points = g["lambda"].get<int>();
    }
    return cfg;
}

ProblemConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace thop
