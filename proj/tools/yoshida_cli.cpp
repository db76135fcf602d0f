#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <yoshida/brandt.hpp>
#include <yoshida/fixture/n17.hpp>
#include <yoshida/fixture/n17_forms.hpp>
#include <yoshida/io/expansion.hpp>
#include <yoshida/io/json.hpp>
#include <yoshida/lift.hpp>
#include <yoshida/quatcore.hpp>
#include <yoshida/siegelhecke.hpp>

using namespace yoshida;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// --fixture n17, or --algebra A.json --order R.json.
struct OrderSource {
  std::string fixture;
  std::string algebra;
  std::string order;

  void add(CLI::App* app) {
    app->add_option("--fixture", fixture, "bundled example (n17)");
    app->add_option("--algebra", algebra, "algebra JSON file");
    app->add_option("--order", order, "order JSON file");
  }

  LatticeOrder load() const {
    if (!fixture.empty()) {
      if (fixture != "n17") throw UsageError("unknown fixture \"" + fixture + "\"");
      return fixture::load_n17().r1;
    }
    if (algebra.empty() || order.empty()) throw UsageError("need --fixture or both --algebra and --order");
    AlgebraPtr a = io::algebra_from(io::parse(read_file(algebra), algebra), algebra);
    auto doc = io::lattice_doc_from(io::parse(read_file(order), order), order);
    if (doc.kind != "order") throw FormatError(order + ": kind must be \"order\"");
    return make_order(io::lattice_from(doc, a, order));
  }
};

long default_seed(const LatticeOrder& r) {
  long level = to_long(order_level(r));
  for (long p = 2;; ++p)
    if (is_prime(p) && level % p != 0) return p;
}

std::vector<long> good_primes(const std::vector<long>& primes, long level) {
  std::vector<long> out;
  for (long p : primes)
    if (level % p != 0) out.push_back(p);
  return out;
}

std::string vec_text(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

int cmd_classset(const OrderSource& src, long seed) {
  LatticeOrder r = src.load();
  if (seed == 0) seed = default_seed(r);
  ClassSet cs = class_set(r, seed);
  std::cout << "level: " << order_level(r) << "\n";
  std::cout << "classes: " << cs.size() << "\n";
  std::cout << "types: " << type_number(cs) << "\n";
  std::cout << "unit counts:";
  for (long e : cs.unit_counts) std::cout << " " << e;
  std::cout << "\nmass: " << to_string(cs.mass()) << "\n";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::cout << "ideal " << i + 1 << ": norm " << to_string(cs.ideals[i].reduced_norm) << ", basis";
    for (std::size_t k = 0; k < 4; ++k) std::cout << " " << vec_text(cs.ideals[i].lattice.basis(k));
    std::cout << "\n";
  }
  return 0;
}

int cmd_brandt(const OrderSource& src, long seed, long p, int nu) {
  LatticeOrder r = src.load();
  if (seed == 0) seed = default_seed(r);
  FormSpace fs(class_set(r, seed), nu);
  BrandtMatrix b = brandt_matrix(fs, p);
  io::Json j;
  j["p"] = p;
  j["nu"] = nu;
  j["matrix"] = io::matrix_json(b.full());
  std::cout << io::dump(j);
  return 0;
}

int cmd_eigenforms(const OrderSource& src, long seed, int nu, const std::vector<long>& primes) {
  LatticeOrder r = src.load();
  if (seed == 0) seed = default_seed(r);
  FormSpace fs(class_set(r, seed), nu);
  auto blocks = eigenforms(fs, good_primes(primes, fs.level()));
  std::cout << "nu: " << nu << ", forms: " << fs.invariant_basis().size() << ", blocks: " << blocks.size() << "\n";
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    std::cout << "block " << k + 1 << ": dimension " << b.basis.size() << "\n";
    if (b.is_eigenform()) {
      auto f = fs.unflatten(b.basis[0]);
      for (std::size_t i = 0; i < f.values.size(); ++i) std::cout << "  phi(y" << i + 1 << ") = " << vec_text(f.values[i]) << "\n";
    }
    for (const auto& [p, f] : b.charpolys) {
      if (b.eigenvalues.count(p))
        std::cout << "  B(" << p << ") eigenvalue " << to_string(b.eigenvalues.at(p)) << "\n";
      else
        std::cout << "  B(" << p << ") factor " << f.to_string("x") << "\n";
    }
    for (const auto& [p, e] : b.involutions) std::cout << "  W(" << p << ") eigenvalue " << to_string(e) << "\n";
  }
  return 0;
}

/// Golden path: the tabulated polynomials on R1 and I12.
int cmd_lift(const std::string& fixture_name, long bound, const std::string& out, const std::string& path) {
  if (fixture_name != "n17") throw UsageError("lift needs --fixture n17");
  auto fx = fixture::load_n17();
  FourierExpansionSiegel2 f;
  if (path == "golden") {
    f = fixture::lift_golden(fx, bound);
  } else if (path == "theory") {
    auto ff = fixture::forms(fx);
    f = yoshida2(ff.fs1, ff.phi1, ff.fs0, ff.phi2, bound);
  } else {
    throw UsageError("--path must be golden or theory");
  }
  write_output(out, io::dump(io::expansion_json(f)));
  if (!out.empty() && out != "-")
    std::cout << "wrote " << f.entries.size() << " coefficients up to discriminant " << bound << " to " << out << "\n";
  return 0;
}

int cmd_hecke(const std::string& in, long p, const std::string& out) {
  auto f = io::expansion_from(io::parse(read_file(in), in), in);
  auto g = hecke_Tp(f, p);
  if (!out.empty()) write_output(out, io::dump(io::expansion_json(g)));
  std::cout << "T(" << p << "): " << g.entries.size() << " coefficients up to discriminant " << g.bound << "\n";
  try {
    std::cout << "eigenvalue: " << to_string(eigenvalue_extract(f, g)) << "\n";
  } catch (const NotEigenformError& e) {
    std::cout << e.what() << "\n";
  } catch (const DegenerateError& e) {
    std::cout << e.what() << "\n";
  }
  return 0;
}

struct LfactorArgs {
  std::string kind = "rankin-selberg";
  long p = 0, k1 = 0, k2 = 0, level = 1;
  std::string af, ag;
  int n = 2;
  double s = 1;
};

int cmd_lfactor(const LfactorArgs& a) {
  if (a.kind == "lambda") {
    auto v = lambda_N(a.level, a.n, a.s);
    if (v.pole)
      std::cout << "Lambda_" << a.level << "(n=" << a.n << ", s=" << fmt_double(a.s) << "): pole at p = " << v.pole_prime
                << ", j = " << v.pole_j << "\n";
    else
      std::cout << "Lambda_" << a.level << "(n=" << a.n << ", s=" << fmt_double(a.s) << ") = " << fmt_double(v.value) << "\n";
    return 0;
  }
  if (a.p == 0 || a.k1 == 0 || a.k2 == 0 || a.af.empty() || a.ag.empty())
    throw UsageError("lfactor needs --p, --af, --ag, --k1 and --k2");
  Rational af = parse_rational(a.af), ag = parse_rational(a.ag);
  LocalFactor f;
  double x;
  if (a.kind == "rankin-selberg") {
    f = rankin_selberg_local(af, ag, a.k1, a.k2, a.p);
    // analytic normalisation: s -> s + (k1 + k2)/2 - 1
    x = std::pow(static_cast<double>(a.p), -(a.s + (a.k1 + a.k2) / 2.0 - 1));
  } else if (a.kind == "standard") {
    f = standard_L_local(SatakePair{a.k1, af, a.p}, SatakePair{a.k2, ag, a.p}, a.n, a.p);
    x = std::pow(static_cast<double>(a.p), -a.s);
  } else {
    throw UsageError("--kind must be rankin-selberg, standard or lambda");
  }
  std::cout << "inverse factor: " << f.to_string() << "\n";
  double inv = f.evaluate_inverse(x);
  std::cout << "at s = " << fmt_double(a.s) << ": inverse " << fmt_double(inv);
  if (inv == 0.0)
    std::cout << ", pole\n";
  else
    std::cout << ", factor " << fmt_double(1 / inv) << "\n";
  return 0;
}

int cmd_roundtrip(const std::string& in, const std::string& out) {
  io::Json j = io::parse(read_file(in), in);
  io::Json canonical;
  if (j.is_object() && j.contains("structure_constants")) {
    canonical = io::algebra_json(*io::algebra_from(j, in));
  } else if (j.is_object() && j.contains("entries")) {
    canonical = io::expansion_json(io::expansion_from(j, in));
  } else if (j.is_object() && j.contains("basis")) {
    auto doc = io::lattice_doc_from(j, in);
    if (doc.kind == "order") {
      // closure is checked against the algebra named by algebra_ref, resolved next to the file
      auto slash = in.find_last_of('/');
      std::string dir = slash == std::string::npos ? "" : in.substr(0, slash + 1);
      std::string apath = dir + doc.algebra_ref;
      AlgebraPtr a = io::algebra_from(io::parse(read_file(apath), apath), apath);
      io::lattice_from(doc, a, in);
    }
    canonical = io::lattice_json(doc);
  } else if (j.is_object() && j.contains("coefficients") && j.contains("hecke_eigenvalues")) {
    // golden tables carry no exact objects beyond strings, so the parsed document is canonical
    canonical = j;
  } else {
    throw FormatError(in + ": unrecognised document (expected an algebra, lattice or expansion)");
  }
  write_output(out, io::dump(canonical));
  return 0;
}

struct Row {
  std::string name, expected, actual;
  bool pass;
};

int cmd_verify_example(long bound) {
  std::vector<Row> rows;
  auto check = [&](std::string name, std::string expected, std::string actual) {
    bool ok = expected == actual;
    rows.push_back({std::move(name), std::move(expected), std::move(actual), ok});
  };
  auto fx = fixture::load_n17();
  ClassSet cs = class_set(fx.r1, 2);
  check("class number", std::to_string(fx.class_number), std::to_string(cs.size()));
  check("type number", std::to_string(fx.type_number), std::to_string(type_number(cs)));
  {
    std::string want, got;
    for (long e : fx.unit_counts) want += (want.empty() ? "" : ",") + std::to_string(e);
    for (long e : cs.unit_counts) got += (got.empty() ? "" : ",") + std::to_string(e);
    check("unit counts", want, got);
  }
  const std::pair<std::string, const Lattice*> lats[] = {{"R1", &fx.r1.lattice}, {"R2", &fx.r2.lattice}, {"I12", &fx.i12.lattice}};
  for (const auto& [name, l] : lats) {
    check("gram " + name, "published", l->gram() == fx.published_gram.at(name) ? "published" : "differs");
    check("gram det " + name, "289", to_string(l->gram_det()));
  }
  check("I12 left order", "R2", fx.i12.left_order == fx.r2 ? "R2" : "other");
  check("I12 right order", "R1", fx.i12.right_order == fx.r1 ? "R1" : "other");

  auto ff = fixture::forms(fx);
  check("<phi2, 1>", "0", to_string(inner_product(ff.phi2, ff.fs0.constant_one(), ff.fs0)));
  check("<phi2, phi2>", "2", to_string(inner_product(ff.phi2, ff.phi2, ff.fs0)));
  auto ev_text = [](const std::optional<Rational>& e) { return e ? to_string(*e) : std::string("not an eigenform"); };
  const std::map<long, std::pair<long, long>> brandt_ev{{2, {-3, -1}}, {3, {-8, 0}}, {5, {6, -2}}};
  for (const auto& [p, ev] : brandt_ev) {
    check("phi1 eigenvalue B(" + std::to_string(p) + ")", std::to_string(ev.first),
          ev_text(eigenvalue_of(brandt_matrix(ff.fs1, p).full(), ff.fs1, ff.phi1)));
    check("phi2 eigenvalue B(" + std::to_string(p) + ")", std::to_string(ev.second),
          ev_text(eigenvalue_of(brandt_matrix(ff.fs0, p).full(), ff.fs0, ff.phi2)));
  }
  check("phi1 eigenvalue W(17)", "1", ev_text(eigenvalue_of(atkin_lehner_matrix(ff.fs1, 17), ff.fs1, ff.phi1)));
  check("phi2 eigenvalue W(17)", "1", ev_text(eigenvalue_of(atkin_lehner_matrix(ff.fs0, 17), ff.fs0, ff.phi2)));

  FourierExpansionSiegel2 f = fixture::lift_golden(fx, bound);
  long matched = 0;
  for (const auto& c : fx.coefficients) {
    Rational got = f({c.a, c.b, c.c});
    BinaryForm t{c.a, c.b, c.c};
    check("a" + t.to_string(), to_string(c.value), to_string(got));
    matched += got == c.value;
  }
  check("coefficients matched", std::to_string(fx.coefficients.size()) + "/" + std::to_string(fx.coefficients.size()),
        std::to_string(matched) + "/" + std::to_string(fx.coefficients.size()));
  check("cuspidal", "yes", is_cuspidal(f) ? "yes" : "no");
  for (const auto& [p, ev] : fx.hecke_eigenvalues) {
    std::string got;
    try {
      got = to_string(eigenvalue_extract(f, hecke_Tp(f, p)));
    } catch (const Error& e) {
      got = e.what();
    }
    check("Hecke eigenvalue T(" + std::to_string(p) + ")", to_string(ev), got);
  }

  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  std::size_t passed = 0;
  for (const auto& r : rows) {
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(w)) << r.name << "  expected "
              << r.expected << ", got " << r.actual << "\n";
    passed += r.pass;
  }
  std::cout << passed << "/" << rows.size() << " checks passed\n";
  return passed == rows.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternionic modular forms and their degree-2 theta lifts"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: YOSHIDA_THREADS or all cores)")->check(CLI::NonNegativeNumber);

  OrderSource src;
  long seed = 0;

  auto* classset = app.add_subcommand("classset", "ideal class set of an order");
  src.add(classset);
  classset->add_option("--seed", seed, "neighbour prime (default: smallest good prime)");

  long p = 0;
  int nu = 0;
  auto* brandt = app.add_subcommand("brandt", "Brandt matrix B(p) on U_nu-valued forms");
  src.add(brandt);
  brandt->add_option("--seed", seed);
  brandt->add_option("--p", p, "prime not dividing the level")->required();
  brandt->add_option("--nu", nu, "harmonic degree")->check(CLI::NonNegativeNumber);

  std::vector<long> primes{2, 3, 5};
  auto* eig = app.add_subcommand("eigenforms", "decompose forms under Brandt operators and involutions");
  src.add(eig);
  eig->add_option("--seed", seed);
  eig->add_option("--nu", nu)->check(CLI::NonNegativeNumber);
  eig->add_option("--primes", primes, "Brandt primes (those dividing the level are skipped)")->delimiter(',');

  std::string fixture_name, out, path = "golden";
  long bound = 100;
  auto* lift = app.add_subcommand("lift", "degree-2 lift of the bundled example");
  lift->add_option("--fixture", fixture_name)->required();
  lift->add_option("--bound", bound, "maximal discriminant")->check(CLI::NonNegativeNumber);
  lift->add_option("--out", out, "output file (default stdout)");
  lift->add_option("--path", path, "golden (tabulated polynomials) or theory (class set construction)");

  std::string in;
  auto* hecke = app.add_subcommand("hecke", "apply T(p) to an expansion file");
  hecke->add_option("--in", in)->required();
  hecke->add_option("--p", p)->required();
  hecke->add_option("--out", out);

  LfactorArgs la;
  auto* lfac = app.add_subcommand("lfactor", "local L-factors and the bad-prime correction");
  lfac->add_option("--kind", la.kind, "rankin-selberg, standard or lambda");
  lfac->add_option("--p", la.p);
  lfac->add_option("--af", la.af, "eigenvalue of the first form (standard: weight-k1 form)");
  lfac->add_option("--ag", la.ag);
  lfac->add_option("--k1", la.k1);
  lfac->add_option("--k2", la.k2);
  lfac->add_option("--n", la.n, "degree");
  lfac->add_option("--s", la.s);
  lfac->add_option("--level", la.level);

  long vbound = 2900;
  auto* verify = app.add_subcommand("verify-example", "recompute every tabulated value of the bundled example");
  verify->add_option("--bound", vbound, "lift discriminant bound (>= 2900 covers T(5))");

  auto* rt = app.add_subcommand("roundtrip", "parse and re-print a JSON document canonically");
  rt->add_option("--in", in)->required();
  rt->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) set_thread_count(threads);
    thread_count();  // validates YOSHIDA_THREADS
    if (*classset) return cmd_classset(src, seed);
    if (*brandt) return cmd_brandt(src, seed, p, nu);
    if (*eig) return cmd_eigenforms(src, seed, nu, primes);
    if (*lift) return cmd_lift(fixture_name, bound, out, path);
    if (*hecke) return cmd_hecke(in, p, out);
    if (*lfac) return cmd_lfactor(la);
    if (*verify) return cmd_verify_example(vbound);
    if (*rt) return cmd_roundtrip(in, out);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
