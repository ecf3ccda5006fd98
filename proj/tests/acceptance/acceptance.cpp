// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "iwalab/escalation.hpp"
#include "iwalab/workbench.hpp"

using namespace iwalab;

namespace {

constexpr int kPrecision = 64;
constexpr int kCap = PadicContext::kMaxPrecision;

struct GammaCase {
    long p;
    std::size_t d;
    std::vector<IntPoly> f;
};

struct CrossedCase {
    long p;
    long kappa;
    std::size_t d;
    std::vector<IntPoly> a;
};

std::vector<GammaCase> gamma_corpus(std::size_t count) {
    std::mt19937_64 rng(1001);
    std::vector<GammaCase> out;
    while (out.size() < count) {
        GammaCase c{out.size() % 2 ? 5L : 3L, 1 + rng() % 3, {}};
        for (std::size_t i = 0; i < c.d * c.d; ++i) c.f.push_back(oracle::random_poly(rng, 4, 9));
        try {
            GammaModule::from_integers(PadicContext(c.p, kPrecision), c.d, c.f);
            out.push_back(std::move(c));
        } catch (const Error& e) {
            if (e.code() != Errc::ValidationError) throw;
        }
    }
    return out;
}

std::vector<CrossedCase> crossed_corpus(std::size_t count, std::uint64_t seed, std::vector<long> primes,
                                        std::vector<long> kappa_steps) {
    std::mt19937_64 rng(seed);
    std::vector<CrossedCase> out;
    while (out.size() < count) {
        const long p = primes[out.size() % primes.size()];
        CrossedCase c{p, 1 + p * kappa_steps[rng() % kappa_steps.size()], 1 + rng() % 2, {}};
        for (std::size_t i = 0; i < c.d * c.d; ++i) c.a.push_back(oracle::random_poly(rng, 2, 5));
        try {
            CrossedModule::from_integers(PadicContext(c.p, kPrecision), c.d, c.kappa, c.a);
            out.push_back(std::move(c));
        } catch (const Error& e) {
            if (e.code() != Errc::ValidationError) throw;
        }
    }
    return out;
}

std::vector<long> gamma_characters(long p) { return {1, 1 + p, 1 + 2 * p, 1 - p, 1 + p * p}; }
std::vector<long> crossed_characters(long p) { return {1, 1 + p, 1 + p * p}; }

std::vector<Level> normal_levels(const CrossedModule& x) {
    std::vector<Level> out;
    for (int n = 0; n <= 2; ++n)
        for (int m = 0; m <= 2; ++m) {
            try {
                out.push_back(x.level(n, m));
            } catch (const Error& e) {
                if (e.code() != Errc::ValidationError) throw;
            }
        }
    return out;
}

bool undecided(const EulerResult& r) { return r.status == EulerStatus::IndeterminateAtPrecision; }

std::size_t rank_at(const CrossedCase& c, const Level& l) {
    return c.d * oracle::ipow(c.p, static_cast<unsigned long>(l.n + l.m)).get_ui();
}

constexpr std::size_t kGroupRingRank = 162;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
                seconds);
    std::fflush(stdout);
}

template <class F>
void criterion(int id, const std::string& name, F body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    report(id, name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

struct Tally {
    std::size_t exists = 0, infinite = 0, escalated = 0;
    void add(const EulerResult& r, int prec) {
        if (r.exists()) ++exists;
        else if (r.status == EulerStatus::NotFiniteDetected) ++infinite;
        if (prec > kPrecision) ++escalated;
    }
    std::string str() const {
        return " (" + std::to_string(exists) + " finite, " + std::to_string(infinite) + " infinite, " +
               std::to_string(escalated) + " escalated)";
    }
};

std::string mismatch_note(std::size_t bad, std::size_t total, const std::string& unit, const std::string& first) {
    std::ostringstream os;
    os << total - bad << "/" << total << " " << unit << " agree";
    if (bad) os << "; first mismatch: " << first;
    return os.str();
}

Outcome twisting_suite(const std::vector<GammaCase>& corpus) {
    std::size_t total = 0, bad = 0;
    Tally tally;
    std::string first;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& c = corpus[i];
        for (long u : gamma_characters(c.p))
            for (int n = 0; n <= 2; ++n) {
                auto [r, prec] = with_escalation(
                    kPrecision, kCap,
                    [&](int N) {
                        GammaModule m = GammaModule::from_integers(PadicContext(c.p, N), c.d, c.f);
                        Character rho = Character::from_integer(m.context(), u);
                        return std::make_pair(euler_characteristic_direct(m, rho, n),
                                              euler_characteristic_analytic(m, rho, n));
                    },
                    [](const auto& r) { return undecided(r.first) || undecided(r.second); });
                ++total;
                const bool ok = r.first.status == r.second.status && r.first.chi_exponent == r.second.chi_exponent &&
                                !undecided(r.first);
                if (!ok && bad++ == 0)
                    first = "module " + std::to_string(i) + " u=" + std::to_string(u) + " n=" + std::to_string(n) +
                            ": " + to_string(r.first.status) + "/" + to_string(r.second.status);
                tally.add(r.first, prec);
            }
    }
    return {bad == 0, mismatch_note(bad, total, "direct/analytic comparisons", first) + tally.str()};
}

Outcome triple_agreement(const std::vector<CrossedCase>& corpus) {
    std::size_t total = 0, bad = 0, group = 0;
    Tally tally;
    std::string first;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& c = corpus[i];
        CrossedModule base = CrossedModule::from_integers(PadicContext(c.p, kPrecision), c.d, c.kappa, c.a);
        for (const Level& l : normal_levels(base)) {
            const bool with_group = rank_at(c, l) <= kGroupRingRank;
            for (long u : crossed_characters(c.p)) {
                struct Triple {
                    EulerResult reduced, akashi, group;
                };
                auto [t, prec] = with_escalation(
                    kPrecision, kCap,
                    [&](int N) {
                        CrossedModule x = CrossedModule::from_integers(PadicContext(c.p, N), c.d, c.kappa, c.a);
                        Character rho = Character::from_integer(x.context(), u);
                        LevelOperator op = level_operator(x, l);
                        Triple r{euler_characteristic_crossed(op, rho), euler_via_akashi(akashi_series(op), rho), {}};
                        r.group = with_group ? group_ring_oracle(x, rho, l) : r.reduced;
                        return r;
                    },
                    [](const Triple& r) { return undecided(r.reduced) || undecided(r.akashi) || undecided(r.group); });
                ++total;
                if (with_group) ++group;
                auto same = [](const EulerResult& a, const EulerResult& b) {
                    return a.status == b.status && a.chi_exponent == b.chi_exponent;
                };
                bool ok = same(t.reduced, t.akashi) && same(t.reduced, t.group) && !undecided(t.reduced);
                for (const auto* r : {&t.reduced, &t.akashi, &t.group})
                    if (r->exists() && r->h1_exponent != 0) ok = false;
                if (!ok && bad++ == 0)
                    first = "module " + std::to_string(i) + " level (" + std::to_string(l.n) + "," +
                            std::to_string(l.m) + ") u=" + std::to_string(u);
                tally.add(t.reduced, prec);
            }
        }
    }
    std::string note = mismatch_note(bad, total, "reduced/Akashi comparisons", first);
    note += ", " + std::to_string(group) + " with the group ring (rank <= " + std::to_string(kGroupRingRank) + ")";
    note += tally.str();
    return {bad == 0, note};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome golden(const std::string& dir) {
    const std::string text = read_file(dir + "/worked_example.json");
    Problem pr = parse_problem(text);
    RunReport rep = run(pr, Command::Euler, {}, text);
    const std::string expected = read_file(dir + "/worked_example.report.json");
    const bool match = strip_timing(rep.json) == strip_timing(expected);

    CrossedModule x = pr.crossed_module(pr.precision);
    const Level l = x.level(1, 1);
    Character four = Character::from_integer(x.context(), 4), one = Character::trivial(x.context());
    bool values = true;
    for (const auto& r : {euler_characteristic_crossed(x, four, l), euler_via_akashi(x, four, l),
                          group_ring_oracle(x, four, l)})
        values = values && r.exists() && r.chi_exponent == 6 && r.h1_exponent == 0;
    for (const auto& r : {euler_characteristic_crossed(x, one, l), euler_via_akashi(x, one, l),
                          group_ring_oracle(x, one, l)})
        values = values && r.status == EulerStatus::NotFiniteDetected;
    std::string note = std::string("chi = 3^6 on all three routes and trivial character infinite: ") +
                       (values ? "yes" : "no") + "; report matches golden file: " + (match ? "yes" : "no");
    return {match && values, note};
}

Outcome search_suite(const std::vector<GammaCase>& gammas, const std::vector<CrossedCase>& crosseds) {
    std::size_t found = 0, total = 0, reverified = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        if (first.empty()) first = what;
    };
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const auto& c = gammas[i];
        ++total;
        auto [rep, prec] = with_escalation(
            kPrecision, kCap,
            [&](int N) { return search_twist(GammaModule::from_integers(PadicContext(c.p, N), c.d, c.f), 2); },
            [](const TwistSearchReport& r) { return r.undecided_before_acceptance(); });
        const CandidateRecord* w = rep.winner();
        if (!w) {
            fail("gamma module " + std::to_string(i) + " found no twist");
            continue;
        }
        ++found;
        GammaModule m = GammaModule::from_integers(PadicContext(c.p, 2 * prec), c.d, c.f);
        Character rho = Character::from_integer(m.context(), w->u);
        bool same = true;
        for (const auto& l : w->levels) {
            EulerResult r = euler_characteristic_direct(m, rho, l.n);
            same = same && r.exists() && r.chi_exponent == l.result.chi_exponent;
        }
        if (same) ++reverified;
        else fail("gamma module " + std::to_string(i) + " certificate changed at doubled precision");
    }
    for (std::size_t i = 0; i < crosseds.size(); ++i) {
        const auto& c = crosseds[i];
        ++total;
        std::vector<Level> levels =
            normal_levels(CrossedModule::from_integers(PadicContext(c.p, kPrecision), c.d, c.kappa, c.a));
        auto [rep, prec] = with_escalation(
            kPrecision, kCap,
            [&](int N) {
                return search_twist_crossed(CrossedModule::from_integers(PadicContext(c.p, N), c.d, c.kappa, c.a),
                                            levels, crossed_search_defaults());
            },
            [](const TwistSearchReport& r) { return r.undecided_before_acceptance(); });
        const CandidateRecord* w = rep.winner();
        if (!w) {
            fail("crossed module " + std::to_string(i) + " found no twist");
            continue;
        }
        ++found;
        CrossedModule x = CrossedModule::from_integers(PadicContext(c.p, 2 * prec), c.d, c.kappa, c.a);
        Character rho = Character::from_integer(x.context(), w->u);
        bool same = true;
        for (const auto& l : w->levels) {
            EulerResult r = euler_characteristic_crossed(x, rho, {l.n, l.m});
            same = same && r.exists() && r.chi_exponent == l.result.chi_exponent;
        }
        if (same) ++reverified;
        else fail("crossed module " + std::to_string(i) + " certificate changed at doubled precision");
    }
    std::ostringstream os;
    os << found << "/" << total << " searches terminated within budget 25, " << reverified
       << " certificates reproduced at doubled precision";
    if (!first.empty()) os << "; first problem: " << first;
    return {found == total && reverified == total, os.str()};
}

Outcome nonabelian(const std::vector<CrossedCase>& corpus) {
    std::size_t total = 0, bad = 0, nonabelian_checked = 0;
    Tally tally;
    std::string first;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& c = corpus[i];
        for (long u : crossed_characters(c.p)) {
            auto [t, prec] = with_escalation(
                kPrecision, kCap,
                [&](int N) {
                    CrossedModule x = CrossedModule::from_integers(PadicContext(c.p, N), c.d, c.kappa, c.a);
                    const Level l = x.level(1, 2);
                    Character rho = Character::from_integer(x.context(), u);
                    return std::make_pair(euler_characteristic_crossed(x, rho, l), group_ring_oracle(x, rho, l));
                },
                [](const auto& r) { return undecided(r.first) || undecided(r.second); });
            ++total;
            // conjugation by g is h -> h^4, a nontrivial automorphism of C_9
            if (c.kappa % 9 != 1) ++nonabelian_checked;
            const bool ok = t.first.status == t.second.status && t.first.chi_exponent == t.second.chi_exponent &&
                            !undecided(t.first);
            if (!ok && bad++ == 0) first = "module " + std::to_string(i) + " u=" + std::to_string(u);
            tally.add(t.first, prec);
        }
    }
    std::string note = mismatch_note(bad, total, "group ring/reduced comparisons at level (1,2)", first);
    note += " on " + std::to_string(corpus.size()) + " modules over the order-27 group" + tally.str();
    return {bad == 0 && nonabelian_checked == total, note};
}

Outcome kernel_suite() {
    std::mt19937_64 rng(6006);
    std::size_t bad = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        if (bad++ == 0) first = what;
    };

    // Weierstrass reconstruction on random series, exact and truncated.
    std::size_t recon = 0;
    for (int t = 0; t < 1000; ++t) {
        const long p = (t % 2) ? 3 : 5;
        const int N = 32;
        PadicContext c(p, N);
        const unsigned long mu = rng() % 3;
        auto fo = oracle::random_poly(rng, 8, 1000);
        for (auto& x : fo) x *= oracle::ipow(p, mu);
        // make sure some coefficient has valuation exactly mu
        const std::size_t lam = rng() % (fo.size() + 1);
        if (lam == fo.size()) fo.push_back(0);
        fo[lam] = oracle::ipow(p, mu) * (1 + p * static_cast<long>(rng() % 7));
        const bool truncated = mu == 0 && t % 4 == 1;
        PowerSeries f = PowerSeries::polynomial(c, fo);
        if (truncated) {
            fo.resize(std::max<std::size_t>(fo.size(), lam * N + 1));
            for (std::size_t k = std::max<std::size_t>(10, lam + 1); k < fo.size(); ++k) fo[k] = static_cast<long>(rng() % 1000);
            f = PowerSeries::truncated(c, fo);
        }
        WeierstrassData w = weierstrass_prepare(f);
        PowerSeries back = w.distinguished.scaled(PadicInt(c, p).pow(w.mu)) * w.unit;
        const std::size_t k = back.is_exact() ? std::max(back.order(), f.order()) : back.order();
        bool ok = back.truncate(k) == f.truncate(k) && w.mu == static_cast<int>(mu);
        ok = ok && w.distinguished.coeff(w.lambda()).residue() == 1;
        for (std::size_t i = 0; i < w.lambda(); ++i) ok = ok && w.distinguished.coeff(i).valuation() >= Valuation::finite(1);
        if (ok) ++recon;
        else fail("Weierstrass reconstruction " + std::to_string(t));
    }

    // Smith exponent sum against an independent determinant.
    std::size_t smith = 0;
    for (int t = 0; t < 300; ++t) {
        const long p = (t % 2) ? 3 : 5;
        PadicContext c(p, 48);
        const std::size_t n = 1 + rng() % 6;
        oracle::Mat m(n, std::vector<mpz_class>(n));
        std::vector<mpz_class> flat;
        for (auto& row : m)
            for (auto& x : row) {
                x = static_cast<long>(rng() % 61) - 30;
                if (rng() % 3 == 0) x *= p;
                flat.push_back(x);
            }
        const mpz_class det = oracle::rational_det(m);
        ElementaryDivisors d = smith_form(PadicMatrix::from_integers(c, n, n, flat));
        const bool ok = det == 0 ? !d.all_finite() : (d.all_finite() && d.exponent_sum() == oracle::vp(det, p));
        if (ok) ++smith;
        else fail("Smith form " + std::to_string(t));
    }

    // det of multiplication modulo omega_n against the Sylvester resultant.
    std::size_t res = 0;
    for (int t = 0; t < 300; ++t) {
        const long p = (t % 2) ? 3 : 5;
        const int n = static_cast<int>(rng() % 3);
        PadicContext c(p, 64);
        auto f = oracle::random_poly(rng, 6, 9);
        const mpz_class r = oracle::sylvester_resultant(oracle::omega(oracle::ipow(p, n).get_ui()), f);
        PadicInt det = det_mult_mod_omega(PowerSeries::polynomial(c, f), n);
        if (det.residue() == c.reduce(r)) ++res;
        else fail("resultant " + std::to_string(t));
    }
    std::ostringstream os;
    os << recon << "/1000 Weierstrass reconstructions, " << smith << "/300 Smith vs determinant, " << res
       << "/300 resultant identities";
    if (bad) os << "; first failure: " << first;
    return {bad == 0, os.str()};
}

Outcome stability(const std::vector<GammaCase>& gammas, const std::vector<CrossedCase>& crosseds) {
    std::size_t checked = 0, bad = 0;
    std::string first;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const auto& c = gammas[i];
        for (long u : gamma_characters(c.p))
            for (int n = 0; n <= 2; ++n) {
                std::vector<EulerResult> rs;
                for (int N : {32, 64, 128}) {
                    GammaModule m = GammaModule::from_integers(PadicContext(c.p, N), c.d, c.f);
                    rs.push_back(euler_characteristic_direct(m, Character::from_integer(m.context(), u), n));
                }
                if (!rs[0].exists()) continue;
                ++checked;
                const bool ok = rs[1].exists() && rs[2].exists() && rs[1].chi_exponent == rs[0].chi_exponent &&
                                rs[2].chi_exponent == rs[0].chi_exponent;
                if (!ok && bad++ == 0) first = "gamma module " + std::to_string(i);
            }
    }
    for (std::size_t i = 0; i < crosseds.size(); ++i) {
        const auto& c = crosseds[i];
        std::vector<Level> levels =
            normal_levels(CrossedModule::from_integers(PadicContext(c.p, 32), c.d, c.kappa, c.a));
        for (const Level& l : levels)
            for (long u : crossed_characters(c.p)) {
                std::vector<EulerResult> rs;
                for (int N : {32, 64, 128}) {
                    CrossedModule x = CrossedModule::from_integers(PadicContext(c.p, N), c.d, c.kappa, c.a);
                    rs.push_back(euler_characteristic_crossed(x, Character::from_integer(x.context(), u), l));
                }
                if (!rs[0].exists()) continue;
                ++checked;
                const bool ok = rs[1].exists() && rs[2].exists() && rs[1].chi_exponent == rs[0].chi_exponent &&
                                rs[2].chi_exponent == rs[0].chi_exponent;
                if (!ok && bad++ == 0) first = "crossed module " + std::to_string(i);
            }
    }
    std::ostringstream os;
    os << checked - bad << "/" << checked << " exponents found at p^32 reproduced at p^64 and p^128";
    if (bad) os << "; first change: " << first;
    return {bad == 0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string golden_dir = argc > 1 ? argv[1] : "tests/golden";
    const auto gammas = gamma_corpus(200);
    const auto crosseds = crossed_corpus(100, 2002, {3, 5}, {1, 2});

    criterion(1, "twisting lemma: direct vs analytic", [&] { return twisting_suite(gammas); });
    criterion(2, "triple agreement", [&] { return triple_agreement(crosseds); });
    criterion(3, "worked golden example", [&] { return golden(golden_dir); });
    criterion(4, "twist search", [&] { return search_suite(gammas, crosseds); });
    criterion(5, "nonabelian level (1,2)", [&] { return nonabelian(crossed_corpus(20, 5005, {3}, {1})); });
    criterion(6, "kernel and series identities", [&] { return kernel_suite(); });
    criterion(7, "precision stability", [&] { return stability(gammas, crosseds); });
    return failures == 0 ? 0 : 1;
}
