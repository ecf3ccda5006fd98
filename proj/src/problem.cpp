#include "iwalab/problem.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace iwalab {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::ParseError, what); }
[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ValidationError, what); }

bool is_scalar(const json& v) { return v.is_string() || v.is_number_integer(); }

mpz_class read_integer(const json& v, const std::string& where) {
    if (v.is_string()) {
        try {
            return parse_integer(v.get<std::string>());
        } catch (const Error& e) {
            parse_fail(where + ": " + e.what());
        }
    }
    if (v.is_number_unsigned()) return mpz_class(std::to_string(v.get<std::uint64_t>()));
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<std::int64_t>()));
    parse_fail(where + ": expected an integer or a decimal string");
}

long read_small(const json& v, const std::string& where, long lo, long hi) {
    mpz_class x = read_integer(v, where);
    if (x < lo || x > hi) invalid(where + ": " + x.get_str() + " outside [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    return x.get_si();
}

IntPoly read_series(const json& v, const std::string& where) {
    if (is_scalar(v)) return {read_integer(v, where)};
    if (!v.is_array() || v.empty()) parse_fail(where + ": a series is a nonempty array of integer strings");
    IntPoly out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!is_scalar(v[k])) parse_fail(where + ": coefficient " + std::to_string(k) + " is not an integer");
        out.push_back(read_integer(v[k], where));
    }
    return out;
}

std::vector<IntPoly> read_matrix(const json& v, std::size_t d, const std::string& name) {
    if (!v.is_array() || v.empty()) parse_fail(name + ": expected a matrix of series");
    // For d = 1 a bare series, or a single row holding a bare series, is accepted.
    if (d == 1) {
        if (std::all_of(v.begin(), v.end(), is_scalar)) return {read_series(v, name)};
        if (v.size() == 1 && v[0].is_array() && v[0].size() != 1 && std::all_of(v[0].begin(), v[0].end(), is_scalar))
            return {read_series(v[0], name)};
    }
    if (v.size() != d) parse_fail(name + ": expected " + std::to_string(d) + " rows");
    std::vector<IntPoly> out;
    for (std::size_t i = 0; i < d; ++i) {
        if (!v[i].is_array() || v[i].size() != d)
            parse_fail(name + ": row " + std::to_string(i) + " must hold " + std::to_string(d) + " series");
        for (std::size_t j = 0; j < d; ++j)
            out.push_back(read_series(v[i][j], name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    }
    return out;
}

std::vector<PowerSeries> truncated_entries(const Problem& pr, const PadicContext& ctx, Variable var) {
    std::vector<PowerSeries> out;
    for (const auto& e : pr.matrix) {
        IntPoly c = e;
        c.resize(*pr.truncation);
        out.push_back(PowerSeries::truncated(ctx, c, var));
    }
    return out;
}

}  // namespace

GammaModule Problem::gamma_module(int prec) const {
    const PadicContext ctx = context(prec);
    if (truncation) return GammaModule::from_series(d, truncated_entries(*this, ctx, Variable::X));
    return GammaModule::from_integers(ctx, d, matrix);
}

CrossedModule Problem::crossed_module(int prec) const {
    const PadicContext ctx = context(prec);
    if (truncation) return CrossedModule::from_series(d, PadicInt(ctx, kappa), truncated_entries(*this, ctx, Variable::Y));
    return CrossedModule::from_integers(ctx, d, kappa, matrix);
}

Problem parse_problem(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) parse_fail("a problem file is a JSON object");

    static const std::set<std::string> common = {"schema", "kind", "p", "N", "truncation", "d", "characters",
                                                 "levels", "budget", "search_seed", "include_trivial"};
    if (!doc.contains("kind") || !doc["kind"].is_string()) parse_fail("missing \"kind\" (gamma or crossed)");
    Problem pr;
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "gamma") pr.kind = ProblemKind::Gamma;
    else if (kind == "crossed") pr.kind = ProblemKind::Crossed;
    else parse_fail("unknown kind \"" + kind + "\"");

    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (common.count(key)) continue;
        if (pr.kind == ProblemKind::Gamma && key == "F") continue;
        if (pr.kind == ProblemKind::Crossed && (key == "A" || key == "kappa")) continue;
        parse_fail("unknown key \"" + key + "\" for a " + kind + " stanza");
    }
    for (const char* key : {"p", "d"})
        if (!doc.contains(key)) parse_fail(std::string("missing \"") + key + "\"");
    const char* matrix_key = pr.kind == ProblemKind::Gamma ? "F" : "A";
    if (!doc.contains(matrix_key)) parse_fail(std::string("missing \"") + matrix_key + "\"");
    if (pr.kind == ProblemKind::Crossed && !doc.contains("kappa")) parse_fail("missing \"kappa\"");

    if (doc.contains("schema")) pr.schema = static_cast<int>(read_small(doc["schema"], "schema", 1, 1));
    pr.p = read_integer(doc["p"], "p");
    if (pr.p < 3 || mpz_probab_prime_p(pr.p.get_mpz_t(), 30) == 0 || mpz_even_p(pr.p.get_mpz_t()))
        invalid("odd prime: p = " + pr.p.get_str() + " is not an odd prime");
    if (doc.contains("N"))
        pr.precision = static_cast<int>(read_small(doc["N"], "N", 1, PadicContext::kMaxPrecision));
    if (doc.contains("truncation"))
        pr.truncation = static_cast<std::size_t>(read_small(doc["truncation"], "truncation", 1, 1 << 20));
    pr.d = static_cast<std::size_t>(read_small(doc["d"], "d", 1, 64));
    pr.matrix = read_matrix(doc[matrix_key], pr.d, matrix_key);
    if (pr.truncation)
        for (const auto& e : pr.matrix)
            if (e.size() > *pr.truncation) invalid("truncation: an entry has more coefficients than the order");
    if (pr.kind == ProblemKind::Crossed) pr.kappa = read_integer(doc["kappa"], "kappa");

    if (doc.contains("characters")) {
        const json& cs = doc["characters"];
        if (!cs.is_array()) parse_fail("characters: expected an array of integers");
        for (const auto& c : cs) pr.characters.push_back(read_integer(c, "characters"));
    } else {
        pr.characters.emplace_back(1);
    }
    for (const auto& u : pr.characters) {
        mpz_class t = u - 1;
        if (!mpz_divisible_p(t.get_mpz_t(), pr.p.get_mpz_t()))
            invalid("character in 1 + pZ_p: u = " + u.get_str() + " has v_p(u - 1) = 0");
    }

    if (doc.contains("levels")) {
        const json& ls = doc["levels"];
        if (!ls.is_array()) parse_fail("levels: expected an array");
        for (const auto& l : ls) {
            if (pr.kind == ProblemKind::Gamma) {
                if (!is_scalar(l)) parse_fail("levels: a gamma level is an integer n");
                pr.levels.push_back({static_cast<int>(read_small(l, "levels", 0, 12)), 0});
            } else {
                if (!l.is_array() || l.size() != 2) parse_fail("levels: a crossed level is a pair [n, m]");
                pr.levels.push_back({static_cast<int>(read_small(l[0], "levels", 0, 12)),
                                     static_cast<int>(read_small(l[1], "levels", 0, 12))});
            }
        }
    } else {
        pr.levels.push_back({0, 0});
    }
    if (doc.contains("budget")) pr.budget = static_cast<int>(read_small(doc["budget"], "budget", 1, 1000000));
    if (doc.contains("search_seed")) {
        mpz_class s = read_integer(doc["search_seed"], "search_seed");
        if (s < 0 || mpz_sizeinbase(s.get_mpz_t(), 2) > 64) invalid("search_seed: must fit in 64 bits");
        pr.search_seed = std::stoull(s.get_str());
    }
    if (doc.contains("include_trivial")) {
        if (!doc["include_trivial"].is_boolean()) parse_fail("include_trivial: expected true or false");
        pr.include_trivial = doc["include_trivial"].get<bool>();
    }

    // Build the module once so invariant violations surface before any work.
    if (pr.kind == ProblemKind::Gamma) {
        pr.gamma_module(pr.precision);
    } else {
        CrossedModule x = pr.crossed_module(pr.precision);
        for (const auto& l : pr.levels) x.level(l.n, l.m);
    }
    return pr;
}

}  // namespace iwalab
