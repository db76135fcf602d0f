// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
// usage: acceptance <path to yoshida cli> <fixture data dir>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "yoshida/fixture/n17_forms.hpp"
#include "yoshida/harmonic.hpp"
#include "yoshida/siegelhecke.hpp"

using namespace yoshida;

namespace {

/// Collects failed sub-checks of one criterion.
struct Criterion {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

const fixture::N17& fx() {
  static const fixture::N17 f = fixture::load_n17();
  return f;
}

const fixture::N17Forms& forms() {
  static const fixture::N17Forms f = fixture::forms(fx());
  return f;
}

Matrix block(const Matrix& m, std::size_t k, std::size_t l) {
  Matrix out(8, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out(4 * k + i, 4 * l + j) = m(i, j);
  return out;
}

bool pluriharmonic(const Poly& p, const Matrix& gram) {
  Matrix gi = inverse(gram);
  return p.laplacian(block(gi, 0, 0)).is_zero() && p.laplacian(block(gi, 1, 1)).is_zero() &&
         p.laplacian(block(gi, 0, 1)).is_zero();
}

void ac1(Criterion& c) {
  const auto& f = fx();
  ClassSet cs = class_set(f.r1, 2);
  c.expect(cs.size() == 2, "class number");
  c.expect(type_number(cs) == 2, "type number");
  std::vector<long> units = cs.unit_counts;
  std::sort(units.begin(), units.end());
  c.expect(units == std::vector<long>{2, 6}, "unit counts");
  c.expect(f.r1.unit_count == 2 && f.r2.unit_count == 6, "unit counts of R1, R2");
  for (const auto* g : {&f.r1.gram(), &f.r2.gram(), &f.i12.gram()}) c.expect(det(*g) == 289, "Gram determinant");
  const auto& a = *f.algebra;
  c.expect(a.trace(a.basis_vector(1)) == 1, "tr(f1)");
  c.expect(a.norm(a.basis_vector(1)) == 2, "n(f1)");
  c.expect(a.norm(a.basis_vector(2)) == 3, "n(f2)");
  c.expect(a.norm(a.basis_vector(3)) == 5, "n(f3)");
  const Matrix& g1 = f.published_gram.at("R1");
  for (std::size_t i = 0; i < 4; ++i) c.expect(g1(i, i) == 2 * a.norm(a.basis_vector(i)), "R1 Gram diagonal");
}

void ac2(Criterion& c) {
  const auto& ff = forms();
  const auto& fs0 = ff.fs0;
  c.expect(inner_product(ff.phi2, fs0.constant_one(), fs0) == 0, "<phi2, 1>");
  c.expect(inner_product(ff.phi2, ff.phi2, fs0) == 2, "<phi2, phi2>");
  for (long p : {2L, 3L, 5L}) {
    Matrix b = brandt_matrix(fs0, p).full();
    for (std::size_t i = 0; i < b.rows(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < b.cols(); ++j) s += b(i, j);
      c.expect(s == p + 1, "row sum of B(" + std::to_string(p) + ")");
    }
  }
  const std::map<long, std::pair<long, long>> ev{{2, {-3, -1}}, {3, {-8, 0}}, {5, {6, -2}}};
  for (const auto& [p, e] : ev) {
    c.expect(eigenvalue_of(brandt_matrix(ff.fs1, p).full(), ff.fs1, ff.phi1) == std::optional<Rational>(e.first),
             "phi1 at B(" + std::to_string(p) + ")");
    c.expect(eigenvalue_of(brandt_matrix(fs0, p).full(), fs0, ff.phi2) == std::optional<Rational>(e.second),
             "phi2 at B(" + std::to_string(p) + ")");
  }
  auto w1 = eigenvalue_of(atkin_lehner_matrix(ff.fs1, 17), ff.fs1, ff.phi1);
  auto w0 = eigenvalue_of(atkin_lehner_matrix(fs0, 17), fs0, ff.phi2);
  c.expect(w1 && w0 && *w1 == *w0, "equal involution eigenvalues");
}

void ac3(Criterion& c) {
  FourierExpansionSiegel2 f = fixture::lift_golden(fx(), 120);
  long matched = 0;
  for (const auto& g : fx().coefficients) matched += f({g.a, g.b, g.c}) == g.value;
  c.expect(matched == 13 && fx().coefficients.size() == 13, "golden coefficients " + std::to_string(matched) + "/13");
  c.expect(f({5, 2, 6}) == -32 && f({4, 2, 6}) == -96 && f({4, 1, 6}) == 32 && f({2, 1, 3}) == 32, "named coefficients");
  for (const auto& t : covered_forms(100))
    if (t.singular() || t.ambiguous()) c.expect(!f.entries.count(t), "coefficient " + t.to_string() + " vanishes");
  c.expect(is_cuspidal(f), "cuspidal");
}

void ac4(Criterion& c) {
  FourierExpansionSiegel2 f = fixture::lift_golden(fx(), 2900);
  const std::map<long, long> expected{{2, -5}, {3, -8}, {5, -4}};
  for (const auto& [p, lambda] : expected) {
    try {
      c.expect(eigenvalue_extract(f, hecke_Tp(f, p)) == lambda, "T(" + std::to_string(p) + ") eigenvalue");
    } catch (const Error& e) {
      c.expect(false, e.what());
    }
  }
  c.expect(hecke_Tp(hecke_Tp(f, 2), 3) == hecke_Tp(hecke_Tp(f, 3), 2), "T(2)T(3) = T(3)T(2)");
}

void ac5(Criterion& c) {
  const std::map<long, std::pair<long, long>> ev{{2, {-3, -1}}, {3, {-8, 0}}, {5, {6, -2}}};
  for (const auto& [p, e] : ev) {
    SatakePair b{4, e.first, p}, bt{2, e.second, p};
    UPoly rs = rankin_selberg_local(e.first, e.second, 4, 2, p).poly;
    UPoly rhs = UPoly(Vec{1, -1}) * rs.scale_variable(make_rational(1, p * p));
    c.expect(standard_L_local(b, bt, 2, p).poly == rhs, "factorisation at p = " + std::to_string(p));
    c.expect(rankin_selberg_check(e.first, e.second, 4, 2, p, 6) == UPoly(Vec{1, 0, -pow_int(Rational(p), 4)}),
             "Dirichlet recursion at p = " + std::to_string(p));
    // normalised Rankin-Selberg value at the edge of absolute convergence
    double v = LocalFactor{p, rs.scale_variable(make_rational(1, p * p))}.value_at(1.0);
    c.expect(std::isfinite(v) && v != 0.0, "nonvanishing at p = " + std::to_string(p));
  }
  LambdaValue l3 = lambda_N(17, 3, 1.0);
  c.expect(l3.pole && l3.pole_prime == 17 && l3.pole_j == 3, "pole of Lambda_17 for n = 3");
  LambdaValue l2 = lambda_N(17, 2, 1.0);
  double exact = 1.0 / ((1 - std::pow(17.0, -2)) * (1 - 1.0 / 17));
  c.expect(!l2.pole && std::abs(l2.value - exact) <= 1e-12, "Lambda_17 for n = 2");
}

void ac6(Criterion& c) {
  const auto& f = fx();
  const auto& a = *f.algebra;
  std::mt19937 rng(20);
  std::uniform_int_distribution<int> d(-9, 9);
  auto rnd = [&] {
    Vec v;
    for (int i = 0; i < 4; ++i) v.push_back(make_rational(d(rng), 1 + (d(rng) + 9) % 4));
    return v;
  };
  for (int t = 0; t < 50; ++t) {
    Vec x = rnd(), y = rnd(), z = rnd();
    c.expect(a.mul(a.mul(x, y), z) == a.mul(x, a.mul(y, z)), "associativity");
    c.expect(a.conj(a.mul(x, y)) == a.mul(a.conj(y), a.conj(x)), "conjugation is an anti-automorphism");
    c.expect(a.norm(a.mul(x, y)) == a.norm(x) * a.norm(y), "norm is multiplicative");
  }
  c.expect(pluriharmonic(bilinear_poly(f.p1), f.r1.gram()), "P1 lift polynomial");
  c.expect(pluriharmonic(bilinear_poly(f.p12), f.i12.gram()), "P12 lift polynomial");
  FramePtr frame = HarmonicFrame::standard(f.algebra);
  for (int nu = 1; nu <= 2; ++nu) {
    HarmSpace h(nu, frame);
    for (const auto& v : h.basis()) {
      c.expect(pluriharmonic(lift_poly_deg2(v), a.basis_gram()), "degree-2 lift polynomial");
      c.expect(lift_poly_deg1(v, h.basis()[0]).laplacian(inverse(a.basis_gram())).is_zero(), "degree-1 lift polynomial");
    }
    for (const auto& u : f.r2.units()) {
      Matrix t = h.tau_matrix(u);
      c.expect(t.transpose() * h.pairing_matrix() * t == h.pairing_matrix(), "pairing invariance under R2 units");
    }
  }
  Poly one = Poly::constant(4, 1);
  auto t1 = theta1_series(f.r1.gram(), one, 20), t2 = theta1_series(f.r2.gram(), one, 20);
  bool witness = false;
  for (std::size_t m = 1; m < t1.size() && !witness; ++m)
    for (std::size_t n = m + 1; n < t1.size() && !witness; ++n) witness = t1[m] * t2[n] != t1[n] * t2[m];
  c.expect(witness, "theta series of R1 and R2 are independent");
  const auto& ff = forms();
  c.expect(yoshida1(ff.fs0, ff.phi2, ff.fs0.constant_one(), 30).is_zero(), "Y1 of distinct eigenforms vanishes");
}

std::string run(const std::string& cmd) {
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  if (status != 0) out += "\n<exit status " + std::to_string(status) + ">";
  return out;
}

void ac7(Criterion& c, const std::string& cli, const std::string& data) {
  if (cli.empty() || data.empty()) {
    c.expect(false, "cli path and data dir are required");
    return;
  }
  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / ("yoshida_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const std::string lift_file = (tmp / "lift.json").string();
  run(cli + " --threads 1 lift --fixture n17 --bound 200 --out " + lift_file);
  const std::vector<std::string> commands{
      "classset --algebra " + data + "/algebra.json --order " + data + "/R1.json",
      "brandt --fixture n17 --p 3 --nu 1",
      "eigenforms --fixture n17 --nu 1 --primes 2,3,5",
      "lift --fixture n17 --bound 200",
      "lift --fixture n17 --bound 80 --path theory",
      "hecke --in " + lift_file + " --p 2",
      "lfactor --kind standard --p 2 --af -3 --ag -1 --k1 4 --k2 2 --n 2",
      "lfactor --kind lambda --level 17 --n 3 --s 1",
      "roundtrip --in " + data + "/golden.json",
      "verify-example",
  };
  for (const auto& cmd : commands) {
    std::string one = run(cli + " --threads 1 " + cmd + " 2>&1");
    std::string four = run(cli + " --threads 4 " + cmd + " 2>&1");
    c.expect(one == four && !one.empty(), "byte-identical output of '" + cmd + "'");
    c.expect(one.find("<exit status") == std::string::npos, "'" + cmd + "' exits 0");
  }
  fs::remove_all(tmp);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string data = argc > 2 ? argv[2] : "";
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"AC1 fixture arithmetic", ac1},
      {"AC2 Eichler side", ac2},
      {"AC3 lift golden test", ac3},
      {"AC4 Hecke golden test", ac4},
      {"AC5 L-function layer", ac5},
      {"AC6 property suites", ac6},
      {"AC7 determinism across thread counts", [&](Criterion& c) { ac7(c, cli, data); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Criterion c;
    auto start = std::chrono::steady_clock::now();
    try {
      check(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (c.failures.empty() ? "PASS" : "FAIL") << "  " << name << "  (" << std::fixed;
    line.precision(2);
    line << secs << " s)";
    std::cout << line.str() << "\n";
    for (const auto& f : c.failures) std::cout << "      " << f << "\n";
    failed += !c.failures.empty();
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
