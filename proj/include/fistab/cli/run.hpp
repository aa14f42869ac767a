#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fistab/bounds/audit.hpp"
#include "fistab/bounds/formulas.hpp"
#include "fistab/congruence/equivariant.hpp"
#include "fistab/congruence/hk.hpp"
#include "fistab/error.hpp"
#include "fistab/fi/construct.hpp"
#include "fistab/fi/io.hpp"
#include "fistab/homology/hyper.hpp"
#include "fistab/homology/invariants.hpp"
#include "fistab/limits.hpp"
#include "fistab/splitbases/spb.hpp"

namespace fistab::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kViolation = 1, kUsage = 2, kInfeasible = 3 };

// What a command hands back. `artifact` is a file-format object (module,
// complex) that goes to stdout or --out in place of the report.
struct Result {
  json inputs = json::object();
  json outputs = json::object();
  std::string text;
  int code = kOk;
  std::optional<json> artifact;
};

struct Globals {
  bool json_out = false;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t max_cells = std::size_t{1} << 24;
  int threads = 0;
};

namespace detail {

inline json read_json(const std::string& path) {
  std::string data;
  if (path == "-") {
    data.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    data.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(data);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

// Decoding errors from nlohmann (missing keys, wrong types) are input errors too.
template <class F>
auto decoding(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline fi::TruncatedFIModule read_module(const std::string& path) {
  const json j = read_json(path);
  return decoding(path, [&] { return fi::decode_fi_module(j); });
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline json validation_json(const fi::ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"check", x.check}, {"n", x.n}, {"witness", x.witness}});
  return {{"pass", r.pass}, {"violations", v}};
}

inline std::string bounds_text(const std::string& head, const bounds::BoundsReport& r) {
  std::string names, values, lines;
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    names += (i ? ", " : "") + r.entries[i].name;
    values += (i ? ", " : "") + std::to_string(r.entries[i].value);
    lines += "  " + r.entries[i].name + " <= " + r.entries[i].formula + "\n";
  }
  return head + ": (" + names + ") = (" + values + ")\n" + lines;
}

inline Result bounds_result(const std::string& head, json inputs, const bounds::BoundsReport& r) {
  Result res;
  res.inputs = std::move(inputs);
  res.outputs = bounds::to_json(r);
  res.text = bounds_text(head, r);
  return res;
}

inline Result verdict_result(const splitbases::Verdict& V, json inputs) {
  Result r;
  r.inputs = std::move(inputs);
  r.outputs = {{"mode", V.mode}, {"pass", V.pass}, {"details", V.details}};
  r.code = V.pass ? kOk : kViolation;
  std::ostringstream s;
  s << V.mode << ": " << (V.pass ? "verified" : "FAILED") << "\n";
  if (V.mode == "theoremD")
    s << "  reduced H_" << V.details["degree"] << " of SPB_" << V.details["n"] << "(Z/" << V.details["p"] << "^"
      << V.details["ell"] << ", " << V.details["p"] << "; F_" << V.details["p"] << ") has dimension "
      << V.details["betti"] << "\n";
  if (V.mode == "charney")
    for (const auto& c : V.details["checked"])
      s << "  reduced H_" << c["degree"] << " = " << c["betti"] << "\n";
  if (V.mode == "spb_in_su")
    for (const auto& d : V.details["dims"])
      s << "  dim " << d["dim"] << ": " << d["in_spb"] << " of " << d["su_simplices"] << " SU simplices in SPB"
        << (d["asserted"].get<bool>() ? "" : " (not asserted)") << "\n";
  s << "  time " << V.details.value("seconds", 0.0) << " s\n";
  r.text = s.str();
  return r;
}

struct RingArgs {
  std::uint32_t m = 4, q = 2;
  int n = 2;
  void add(CLI::App* c, bool with_n = true) {
    c->add_option("--m", m, "ring modulus m of Z/m")->capture_default_str();
    c->add_option("--q", q, "generator of the ideal qZ/m")->capture_default_str();
    if (with_n) c->add_option("--n", n, "rank")->capture_default_str();
  }
  splitbases::FiniteModRing ring() const { return splitbases::FiniteModRing(m, q); }
  json to_json() const { return {{"m", m}, {"q", q}, {"n", n}}; }
};

}  // namespace detail

// All state for one invocation. Subcommands register a closure in `action`.
class Cli {
 public:
  Cli() : app_("fistab: representation stability workbench for FI-modules and congruence subgroups", "fistab") {
    app_.require_subcommand(1);
    app_.fallthrough();
    app_.set_version_flag("--version", kVersion);
    app_.add_flag("--json", g_.json_out, "print the report as JSON");
    app_.add_option("--out", g_.out, "write the artifact (or the JSON report) to FILE");
    seed_opt_ = app_.add_option("--seed", g_.seed, "seed for randomized commands");
    app_.add_option("--max-cells", g_.max_cells, "largest chain group or face level to build")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app_.add_option("--threads", g_.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    add_fimod();
    add_bounds();
    add_spb();
    add_cong();
  }

  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    std::string echo = "fistab";
    for (auto it = args.rbegin(); it != args.rend(); ++it) echo += " " + *it;
    try {
      app_.parse(args);
    } catch (const CLI::ParseError& e) {
      const int c = app_.exit(e, out, err);
      return c == 0 ? kOk : kUsage;
    }
    g_.seed_given = seed_opt_->count() > 0;
    max_cells() = g_.max_cells;
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = action_();
    } catch (const InputError& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const FeasibilityError& e) {
      err << "infeasible: " << e.what() << "\n";
      return kInfeasible;
    } catch (const WindowExhausted& e) {
      err << "infeasible: window too short: " << e.what() << "\n";
      return kInfeasible;
    } catch (const NoFit& e) {
      err << "violation: " << e.what() << "\n";
      return kViolation;
    } catch (const ConsistencyError& e) {
      err << "violation: internal cross-check failed: " << e.what() << "\n";
      return kViolation;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json report{{"tool", "fistab"},
                {"version", kVersion},
                {"command", echo},
                {"seed", g_.seed_given ? json(g_.seed) : json(nullptr)},
                {"inputs", r.inputs},
                {"outputs", r.outputs},
                {"verdict", r.code == kOk ? "ok" : "violation"},
                {"exit_code", r.code},
                {"timings", {{"seconds", secs}}}};
    auto write_file = [&](const json& j) {
      std::ofstream f(g_.out);
      if (!f) {
        err << "error: cannot write " << g_.out << "\n";
        return false;
      }
      f << j.dump(2) << "\n";
      return true;
    };
    if (r.artifact) {
      if (g_.out.empty()) {
        out << r.artifact->dump() << "\n";
        return r.code;
      }
      if (!write_file(*r.artifact)) return kUsage;
    } else if (!g_.out.empty() && !write_file(report)) {
      return kUsage;
    }
    if (g_.json_out)
      out << report.dump(2) << "\n";
    else
      out << r.text;
    return r.code;
  }

 private:
  CLI::App app_;
  Globals g_;
  CLI::Option* seed_opt_ = nullptr;
  std::function<Result()> action_;

  void on(CLI::App* c, std::function<Result()> f) {
    c->callback([this, f = std::move(f)] { action_ = f; });
  }

  std::uint64_t require_seed(const char* what) const {
    if (!g_.seed_given) throw InputError(std::string(what) + " is randomized: --seed is required");
    return g_.seed;
  }

  // ---- fimod -----------------------------------------------------------------

  struct FimodArgs {
    std::string file;
    int i_max = 1, k_max = 2;
    std::string kind;
    std::uint32_t p = 2;
    int N = 6, m = 1, gen_deg = 1, rel_deg = 2, gen_count = 2, rel_count = 2;
    std::vector<std::string> V;
    std::string a, b;
  } fa_;

  void add_fimod() {
    auto* fm = app_.add_subcommand("fimod", "truncated FI-modules: validate, construct, invariants");
    fm->require_subcommand(1);

    auto* val = fm->add_subcommand("validate", "check the FI relations of a module or complex file");
    val->add_option("file", fa_.file, "fi_module or fi_complex JSON ('-' for stdin)")->required();
    on(val, [this] {
      const json j = detail::read_json(fa_.file);
      Result r;
      r.inputs = {{"file", fa_.file}};
      fi::ValidationReport rep;
      detail::decoding(fa_.file, [&] {
        if (j.is_object() && j.value("kind", "") == "fi_complex")
          rep = fi::validate(fi::decode_fi_complex(j));
        else
          rep = fi::validate(fi::decode_fi_module(j));
        return 0;
      });
      r.outputs = detail::validation_json(rep);
      r.code = rep.pass ? kOk : kViolation;
      r.text = rep.pass ? "valid\n" : "invalid:\n";
      for (const auto& v : rep.violations) r.text += "  " + v.check + " fails at n=" + std::to_string(v.n) + "\n";
      return r;
    });

    auto* con = fm->add_subcommand("construct", "build a module: constant, free, torsion, induced, sum, random");
    con->add_option("kind", fa_.kind, "constant | free | torsion | induced | sum | random")
        ->required()
        ->check(CLI::IsMember({"constant", "free", "torsion", "induced", "sum", "random"}));
    con->add_option("--p", fa_.p, "prime")->capture_default_str();
    con->add_option("--N", fa_.N, "window width")->capture_default_str();
    con->add_option("--m", fa_.m, "degree for free / torsion")->capture_default_str();
    con->add_option("--V", fa_.V, "FB summands for induced: trivial:M, sign:M or regular:M");
    con->add_option("--a", fa_.a, "first module file for sum");
    con->add_option("--b", fa_.b, "second module file for sum");
    con->add_option("--gen-deg", fa_.gen_deg, "top generator degree for random")->capture_default_str();
    con->add_option("--rel-deg", fa_.rel_deg, "top relation degree for random")->capture_default_str();
    con->add_option("--gen-count", fa_.gen_count, "generators for random")->capture_default_str();
    con->add_option("--rel-count", fa_.rel_count, "relations for random")->capture_default_str();
    on(con, [this] { return construct(); });

    auto* inv = fm->add_subcommand("invariants", "t0, t1, stable and local degree with certification");
    inv->add_option("file", fa_.file, "fi_module JSON ('-' for stdin)")->required();
    inv->add_option("--i-max", fa_.i_max, "highest FI-homology row to report")->capture_default_str();
    on(inv, [this] {
      const auto M = detail::read_module(fa_.file);
      const auto I = homology::invariants(M, fa_.i_max);
      Result r;
      r.inputs = {{"file", fa_.file}, {"p", M.p()}, {"N", M.width()}};
      r.outputs = homology::to_json(I);
      std::ostringstream s;
      s << "dims: " << detail::join(M.dims()) << "\n"
        << "t0 = " << I.t0 << ", t1 = " << I.t1 << "\n"
        << "delta = " << I.delta.value << (I.delta.certified ? " (certified)" : " (uncertified)") << "\n"
        << "hmax = " << I.hmax.value << (I.hmax.certified ? " (certified)" : " (uncertified)") << "\n";
      for (int i = 0; i <= I.tables.i_max(); ++i) s << "H_" << i << ": " << detail::join(I.tables.dims[i]) << "\n";
      r.text = s.str();
      return r;
    });

    auto* hom = fm->add_subcommand("homology", "FI-homology table of a module, or hyperhomology of a complex");
    hom->add_option("file", fa_.file, "fi_module or fi_complex JSON ('-' for stdin)")->required();
    hom->add_option("--i-max", fa_.i_max, "highest row for a module")->capture_default_str();
    hom->add_option("--k-max", fa_.k_max, "highest total degree for a complex")->capture_default_str();
    on(hom, [this] {
      const json j = detail::read_json(fa_.file);
      Result r;
      r.inputs = {{"file", fa_.file}};
      std::ostringstream s;
      if (j.is_object() && j.value("kind", "") == "fi_complex") {
        const auto C = detail::decoding(fa_.file, [&] { return fi::decode_fi_complex(j); });
        const auto T = homology::hyper_fi_homology(C, fa_.k_max);
        json rows = json::array();
        for (std::size_t i = 0; i < T.dims.size(); ++i) {
          const int k = T.kmin + static_cast<int>(i);
          rows.push_back({{"k", k}, {"dims", T.dims[i]}, {"degree", T.degree(k)}});
          s << "H_" << k << ": " << detail::join(T.dims[i]) << "  (degree " << T.degree(k) << ")\n";
        }
        r.outputs = {{"hyper", rows}};
      } else {
        const auto M = detail::decoding(fa_.file, [&] { return fi::decode_fi_module(j); });
        const auto T = homology::fi_homology_table(M, fa_.i_max);
        json degs = json::array();
        for (int i = 0; i <= T.i_max(); ++i) {
          degs.push_back(T.degree(i));
          s << "H_" << i << ": " << detail::join(T.dims[i]) << "  (degree " << T.degree(i) << ")\n";
        }
        r.outputs = {{"table", homology::to_json(T)}, {"degrees", degs}};
      }
      r.text = s.str();
      return r;
    });

    auto* fit = fm->add_subcommand("fit", "polynomial through the stable range");
    fit->add_option("file", fa_.file, "fi_module JSON ('-' for stdin)")->required();
    on(fit, [this] {
      const auto M = detail::read_module(fa_.file);
      const auto I = homology::invariants(M);
      const auto f = homology::polynomial_fit(M, I.delta.value, I.hmax.value, I.certified);
      Result r;
      r.inputs = {{"file", fa_.file}};
      r.outputs = {{"degree", f.degree},
                   {"coeffs_binomial_basis", f.coeffs},
                   {"onset", f.onset},
                   {"certified", f.certified},
                   {"delta", I.delta.value},
                   {"hmax", I.hmax.value}};
      std::ostringstream s;
      s << "dim M_n = ";
      bool any = false;
      for (std::size_t j = 0; j < f.coeffs.size(); ++j) {
        if (!f.coeffs[j]) continue;
        s << (any ? " + " : "") << f.coeffs[j] << "*C(n," << j << ")";
        any = true;
      }
      if (!any) s << "0";
      s << " for n >= " << f.onset << (f.certified ? " (certified)" : " (uncertified)") << "\n";
      r.text = s.str();
      return r;
    });
  }

  Result construct() {
    const auto& a = fa_;
    if (!exactlin::is_prime(a.p)) throw InputError("--p must be prime");
    if (a.N < 0) throw InputError("--N must be >= 0");
    Result r;
    r.inputs = {{"kind", a.kind}, {"p", a.p}, {"N", a.N}};
    fi::TruncatedFIModule M(a.p, 0);
    if (a.kind == "constant") {
      M = fi::constant(a.p, a.N);
    } else if (a.kind == "free") {
      if (a.m < 0) throw InputError("--m must be >= 0");
      M = fi::free_module(a.p, a.m, a.N);
      r.inputs["m"] = a.m;
    } else if (a.kind == "torsion") {
      M = fi::torsion_point(a.p, a.m, a.N);
      r.inputs["m"] = a.m;
    } else if (a.kind == "induced") {
      if (a.V.empty()) throw InputError("induced needs at least one --V summand");
      fi::FBModuleWindow V = fi::fb_zero(a.p, 0);
      for (const auto& spec : a.V) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos) throw InputError("bad --V summand " + spec + " (expected type:degree)");
        const std::string type = spec.substr(0, colon);
        int deg = -1;
        try {
          deg = std::stoi(spec.substr(colon + 1));
        } catch (const std::exception&) {
          throw InputError("bad degree in --V summand " + spec);
        }
        if (deg < 0) throw InputError("negative degree in --V summand " + spec);
        if (type == "trivial")
          V = fi::fb_direct_sum(V, fi::fb_trivial(a.p, deg));
        else if (type == "sign")
          V = fi::fb_direct_sum(V, fi::fb_sign(a.p, deg));
        else if (type == "regular")
          V = fi::fb_direct_sum(V, fi::fb_regular(a.p, deg));
        else
          throw InputError("unknown FB summand type " + type);
      }
      M = fi::induced(V, a.N);
      r.inputs["V"] = a.V;
    } else if (a.kind == "sum") {
      if (a.a.empty() || a.b.empty()) throw InputError("sum needs --a FILE and --b FILE");
      M = fi::direct_sum(detail::read_module(a.a), detail::read_module(a.b));
      r.inputs["a"] = a.a;
      r.inputs["b"] = a.b;
    } else {
      fi::RandomPresentedSpec s;
      s.seed = require_seed("random_presented");
      s.p = a.p;
      s.N = a.N;
      s.gen_deg = a.gen_deg;
      s.rel_deg = a.rel_deg;
      s.gen_count = a.gen_count;
      s.rel_count = a.rel_count;
      M = fi::random_presented(s);
      r.inputs.update({{"gen_deg", a.gen_deg}, {"rel_deg", a.rel_deg}, {"gen_count", a.gen_count},
                       {"rel_count", a.rel_count}});
    }
    r.artifact = fi::encode(M);
    r.outputs = {{"dims", M.dims()}};
    r.text = "constructed " + a.kind + " module, dims " + detail::join(M.dims()) + "\n";
    return r;
  }

  // ---- bounds ----------------------------------------------------------------

  struct BoundsArgs {
    std::string mode = "delta-hmax";
    std::int64_t a = 0, b = 0, k = 0, t0 = 0, t1 = 0, delta = 0, d = 0, mu = 1, dim = 2;
    std::int64_t deltaA = 0, hA = -1, deltaB = 0, hB = -1;
    std::vector<std::int64_t> D, eta, step;
    bool orientable = false, non_orientable = false, two_vector_fields = false;
    int modules = 60, maps = 30, complexes = 30, N = 8;
  } ba_;

  void add_bounds() {
    auto* b = app_.add_subcommand("bounds", "closed-form stable-range bounds and the inequality audit");
    b->require_subcommand(1);
    auto& A = ba_;

    auto* star = b->add_subcommand("star", "t0/t1 from (delta, hmax), or delta/hmax from (t0, t1)");
    star->add_option("--mode", A.mode, "delta-hmax | t0-t1")
        ->check(CLI::IsMember({"delta-hmax", "t0-t1"}))
        ->capture_default_str();
    star->add_option("--a", A.a, "delta or t0")->required();
    star->add_option("--b", A.b, "hmax or t1")->required();
    on(star, [this] {
      const auto mode = ba_.mode == "delta-hmax" ? bounds::StarMode::from_delta_hmax : bounds::StarMode::from_t0_t1;
      return detail::bounds_result("star_bounds(" + ba_.mode + ")", {{"mode", ba_.mode}, {"a", ba_.a}, {"b", ba_.b}},
                                   bounds::star_bounds(mode, ba_.a, ba_.b));
    });

    auto* lc = b->add_subcommand("localcohom", "local cohomology degrees h^i from t0, t1, delta");
    lc->add_option("--t0", A.t0)->required();
    lc->add_option("--t1", A.t1)->required();
    lc->add_option("--delta", A.delta)->required();
    on(lc, [this] {
      return detail::bounds_result("local_cohomology_bounds",
                                   {{"t0", ba_.t0}, {"t1", ba_.t1}, {"delta", ba_.delta}},
                                   bounds::local_cohomology_bounds(ba_.t0, ba_.t1, ba_.delta));
    });

    auto* kc = b->add_subcommand("kercoker", "kernel and cokernel of a map A -> B");
    kc->add_option("--deltaA", A.deltaA)->required();
    kc->add_option("--hA", A.hA)->required();
    kc->add_option("--deltaB", A.deltaB)->required();
    kc->add_option("--hB", A.hB)->required();
    on(kc, [this] {
      return detail::bounds_result(
          "kercoker_bounds", {{"deltaA", ba_.deltaA}, {"hA", ba_.hA}, {"deltaB", ba_.deltaB}, {"hB", ba_.hB}},
          bounds::kercoker_bounds(ba_.deltaA, ba_.hA, ba_.deltaB, ba_.hB));
    });

    auto* ta = b->add_subcommand("typeA", "propagation through a spectral sequence from page d");
    ta->add_option("--d", A.d, "first page")->required();
    ta->add_option("--D", A.D, "stable-degree bounds D_0 D_1 ... on the diagonals")->required();
    ta->add_option("--eta", A.eta, "local-degree bounds eta_0 eta_1 ...")->required();
    ta->add_option("--k", A.k)->required();
    on(ta, [this] {
      bounds::SpectralInput S{ba_.d, ba_.D, ba_.eta};
      return detail::bounds_result("typeA_propagate", {{"d", ba_.d}, {"D", ba_.D}, {"eta", ba_.eta}, {"k", ba_.k}},
                                   bounds::typeA_propagate(S, ba_.k));
    });

    auto* ts = b->add_subcommand("typeA-semi", "semi-induced E_2 page with slope mu and offset d");
    ts->add_option("--mu", A.mu)->required();
    ts->add_option("--d", A.d)->required();
    ts->add_option("--k", A.k)->required();
    on(ts, [this] {
      return detail::bounds_result("typeA_semiinduced", {{"mu", ba_.mu}, {"d", ba_.d}, {"k", ba_.k}},
                                   bounds::typeA_semiinduced(ba_.mu, ba_.d, ba_.k));
    });

    auto* cf = b->add_subcommand("config", "cohomology of ordered configuration spaces of a manifold");
    cf->add_option("--dim", A.dim, "manifold dimension")->required();
    auto* o1 = cf->add_flag("--orientable", A.orientable);
    auto* o2 = cf->add_flag("--non-orientable", A.non_orientable);
    o1->excludes(o2);
    cf->add_flag("--two-vector-fields", A.two_vector_fields, "manifold admits two independent vector fields");
    cf->add_option("--k", A.k)->required();
    on(cf, [this] {
      if (ba_.orientable == ba_.non_orientable) throw InputError("give exactly one of --orientable, --non-orientable");
      return detail::bounds_result("config_bounds",
                                   {{"dim", ba_.dim},
                                    {"orientable", ba_.orientable},
                                    {"two_vector_fields", ba_.two_vector_fields},
                                    {"k", ba_.k}},
                                   bounds::config_bounds(ba_.dim, ba_.orientable, ba_.two_vector_fields, ba_.k));
    });

    auto* tb = b->add_subcommand("typeB", "growth bounds when hyperhomology degrees grow like a*k + b");
    tb->add_option("--a", A.a)->required();
    tb->add_option("--b", A.b)->required();
    tb->add_option("--k", A.k)->required();
    tb->add_option("--step", A.step, "also evaluate the local-degree recursion at T_K T_K1 PREV_H")->expected(3);
    on(tb, [this] {
      auto r = detail::bounds_result("typeB_growth", {{"a", ba_.a}, {"b", ba_.b}, {"k", ba_.k}},
                                     bounds::typeB_growth(ba_.a, ba_.b, ba_.k));
      if (ba_.step.size() == 3) {
        const auto s = bounds::typeB_step(ba_.step[0], ba_.step[1], ba_.step[2]);
        r.inputs["step"] = ba_.step;
        r.outputs["step"] = s;
        r.text += "step(" + std::to_string(ba_.step[0]) + ", " + std::to_string(ba_.step[1]) + ", " +
                  std::to_string(ba_.step[2]) + ") = " + std::to_string(s) + "\n";
      }
      return r;
    });

    auto* cg = b->add_subcommand("congruence", "homology of congruence subgroups of level d rings");
    cg->add_option("--d", A.d)->required();
    cg->add_option("--k", A.k)->required();
    on(cg, [this] {
      return detail::bounds_result("congruence_bounds", {{"d", ba_.d}, {"k", ba_.k}},
                                   bounds::congruence_bounds(ba_.d, ba_.k));
    });

    auto* au = b->add_subcommand("audit", "check every inequality on seeded random modules, maps, complexes");
    au->add_option("--modules", A.modules)->capture_default_str();
    au->add_option("--maps", A.maps)->capture_default_str();
    au->add_option("--complexes", A.complexes)->capture_default_str();
    au->add_option("--N", A.N, "window width")->capture_default_str();
    on(au, [this] {
      bounds::AuditConfig cfg;
      cfg.seed = require_seed("audit");
      cfg.modules = ba_.modules;
      cfg.maps = ba_.maps;
      cfg.complexes = ba_.complexes;
      cfg.N = ba_.N;
      cfg.threads = g_.threads;
      const auto a = bounds::audit(cfg);
      Result r;
      r.inputs = {{"modules", cfg.modules}, {"maps", cfg.maps}, {"complexes", cfg.complexes}, {"N", cfg.N}};
      r.outputs = bounds::to_json(a);
      r.code = a.violations.empty() ? kOk : kViolation;
      std::ostringstream s;
      s << a.instances << " instances, " << a.checks << " checks, " << a.skipped << " skipped, "
        << a.violations.size() << " violations\n";
      for (const auto& v : a.violations)
        s << "  " << v.instance << ": " << v.inequality << " (" << v.lhs << " > " << v.rhs << ")\n";
      r.text = s.str();
      return r;
    });
  }

  // ---- spb -------------------------------------------------------------------

  struct SpbArgs {
    detail::RingArgs ring;
    std::string variant = "SPB_modI", file;
    std::uint32_t p = 0;
    bool integral = false;
    int kmax = -2, d = 0, ell = 2, k = 1;
  } sa_;

  void add_verify(CLI::App* parent) {
    auto* v = parent->add_subcommand("verify", "verify acyclicity / nonvanishing claims on SPB complexes");
    v->require_subcommand(1);
    auto& A = sa_;

    auto* ch = v->add_subcommand("charney", "reduced H_j(SPB_n) = 0 for n >= 2j + d + 3");
    A.ring.add(ch);
    ch->add_option("--d", A.d)->capture_default_str();
    ch->add_option("--p", A.p, "coefficient prime (default: smallest prime factor of m)");
    on(ch, [this] {
      const auto R = sa_.ring.ring();
      const std::uint32_t p = sa_.p ? sa_.p : splitbases::smallest_prime_factor(R.m);
      json in = sa_.ring.to_json();
      in["d"] = sa_.d;
      in["p"] = p;
      return detail::verdict_result(splitbases::verify_charney(R, sa_.ring.n, sa_.d, p), in);
    });

    auto* td = v->add_subcommand("theoremD", "reduced H_{k-1}(SPB_2k(Z/p^ell, p); F_p) is nonzero");
    td->add_option("--p", A.p)->required();
    td->add_option("--ell", A.ell)->required();
    td->add_option("--k", A.k)->required();
    on(td, [this] {
      return detail::verdict_result(splitbases::verify_theorem_d(sa_.p, sa_.ell, sa_.k),
                                    {{"p", sa_.p}, {"ell", sa_.ell}, {"k", sa_.k}});
    });

    auto* su = v->add_subcommand("spb_in_su", "low-dimensional simplices of SU_n lie in SPB_n");
    su->alias("spb-in-su");
    A.ring.add(su);
    su->add_option("--d", A.d)->capture_default_str();
    on(su, [this] {
      json in = sa_.ring.to_json();
      in["d"] = sa_.d;
      return detail::verdict_result(splitbases::verify_spb_in_su(sa_.ring.ring(), sa_.ring.n, sa_.d), in);
    });

    auto* yg = v->add_subcommand("ygamma", "Y_Gamma is isomorphic to SPB_n and Gamma is saturated");
    A.ring.add(yg);
    on(yg, [this] {
      const auto t0 = std::chrono::steady_clock::now();
      const splitbases::FIGroupWindow W(sa_.ring.ring(), sa_.ring.n);
      const auto Y = splitbases::y_gamma_complex(W, sa_.ring.n);
      splitbases::Verdict V{"ygamma", Y.iso_to_spb && Y.saturated, {}};
      V.details = {{"iso_to_spb", Y.iso_to_spb},
                   {"saturated", Y.saturated},
                   {"iso_failure", Y.iso_failure},
                   {"vertices", Y.complex.vertices()},
                   {"maximal_simplices", Y.complex.maximal.size()},
                   {"seconds", splitbases::seconds_since(t0)}};
      auto r = detail::verdict_result(V, sa_.ring.to_json());
      r.text += std::string("  isomorphic to SPB: ") + (Y.iso_to_spb ? "yes" : "no (" + Y.iso_failure + ")") +
                ", saturated: " + (Y.saturated ? "yes" : "no") + "\n";
      return r;
    });
  }

  void add_spb() {
    auto* s = app_.add_subcommand("spb", "split partial bases complexes over Z/m");
    s->require_subcommand(1);
    auto& A = sa_;

    auto* b = s->add_subcommand("build", "write the complex in the simplicial file format");
    A.ring.add(b);
    b->add_option("--variant", A.variant, "SPB_modI | SU_modI | SPB | SU")->capture_default_str();
    on(b, [this] {
      const auto X = splitbases::spb_complex(sa_.ring.ring(), sa_.ring.n, splitbases::parse_variant(sa_.variant));
      Result r;
      r.inputs = sa_.ring.to_json();
      r.inputs["variant"] = sa_.variant;
      r.outputs = {{"vertices", X.complex.vertices()},
                   {"maximal_simplices", X.complex.maximal.size()},
                   {"dim", X.complex.dim()}};
      r.artifact = splitbases::to_json(X.complex);
      r.text = sa_.variant + ": " + std::to_string(X.complex.vertices()) + " vertices, " +
               std::to_string(X.complex.maximal.size()) + " maximal simplices, dimension " +
               std::to_string(X.complex.dim()) + "\n";
      return r;
    });

    auto* h = s->add_subcommand("homology", "reduced homology of a complex file or of a built complex");
    h->add_option("file", A.file, "simplicial JSON ('-' for stdin); omit to build from --m/--q/--n");
    A.ring.add(h);
    h->add_option("--variant", A.variant, "SPB_modI | SU_modI | SPB | SU")->capture_default_str();
    h->add_option("--p", A.p, "coefficient prime (default: smallest prime factor of m; 2 for a file)");
    h->add_flag("--z", A.integral, "integer coefficients with torsion");
    h->add_option("--kmax", A.kmax, "top degree (default: dimension of the complex)");
    on(h, [this] {
      Result r;
      splitbases::SimplicialComplex X;
      if (!sa_.file.empty()) {
        const json j = detail::read_json(sa_.file);
        X = detail::decoding(sa_.file, [&] { return splitbases::complex_from_json(j); });
        r.inputs = {{"file", sa_.file}};
      } else {
        X = splitbases::spb_complex(sa_.ring.ring(), sa_.ring.n, splitbases::parse_variant(sa_.variant)).complex;
        r.inputs = sa_.ring.to_json();
        r.inputs["variant"] = sa_.variant;
      }
      const int kmax = sa_.kmax >= -1 ? sa_.kmax : std::max(X.dim(), -1);
      std::uint32_t p = sa_.p;
      if (!sa_.integral && !p) p = sa_.file.empty() ? splitbases::smallest_prime_factor(sa_.ring.m) : 2;
      const auto H = sa_.integral ? splitbases::reduced_homology_z(X, kmax) : splitbases::reduced_homology_fp(X, p, kmax);
      r.inputs["coefficients"] = sa_.integral ? json("Z") : json("F_" + std::to_string(p));
      r.outputs = splitbases::to_json(H);
      std::ostringstream s;
      s << "f-vector: " << detail::join(H.f_vector) << "\n";
      for (int k = -1; k <= kmax; ++k) {
        s << "reduced H_" << k << ": " << H.at(k);
        if (H.integral && !H.torsion[k + 1].empty()) {
          s << " free, torsion";
          for (const auto& t : H.torsion[k + 1]) s << " Z/" << t;
        }
        s << "\n";
      }
      r.text = s.str();
      return r;
    });

    add_verify(s);
  }

  // ---- cong ------------------------------------------------------------------

  struct CongArgs {
    detail::RingArgs ring;
    int k = 1, N = 6, n = 1, ell = 2, bar_k = -1;
    std::uint32_t p = 2;
  } ca_;

  void add_cong() {
    auto* c = app_.add_subcommand("cong", "congruence subgroups: structure, H_k as FI-modules, bound checks");
    c->require_subcommand(1);
    auto& A = ca_;

    auto* g = c->add_subcommand("group", "structure of GL_n(Z/m, q), optionally one bar homology group");
    A.ring.add(g);
    g->add_option("--bar-k", A.bar_k, "also compute dim H_k(group; F_p) from the bar complex");
    g->add_option("--p", A.p, "coefficient prime for --bar-k")->capture_default_str();
    on(g, [this] {
      Result r;
      r.inputs = ca_.ring.to_json();
      const auto CG = splitbases::congruence_group(ca_.ring.ring(), ca_.ring.n);
      const auto G = congruence::FiniteGroup::from_congruence(CG);
      const auto S = congruence::identify_structure(G);
      r.outputs = congruence::to_json(S);
      std::ostringstream s;
      s << "order " << S.order << ", " << (S.abelian ? "abelian" : "non-abelian") << ", exponent " << S.exponent;
      if (S.elementary_rank) s << ", elementary abelian of rank " << *S.elementary_rank;
      s << "\n";
      if (ca_.bar_k >= 0) {
        const auto b = congruence::bar_homology_oracle(G, ca_.bar_k, ca_.p);
        r.inputs["bar_k"] = ca_.bar_k;
        r.inputs["p"] = ca_.p;
        r.outputs["bar"] = {{"k", ca_.bar_k}, {"p", ca_.p}, {"dim", b.dim}, {"cells", b.cells},
                            {"route", b.route}};
        s << "dim H_" << ca_.bar_k << "(Gamma; F_" << ca_.p << ") = " << b.dim << "\n";
        if (S.elementary_rank && S.prime == ca_.p) {
          const auto f = congruence::cohom_dim_formula(*S.elementary_rank, ca_.bar_k);
          r.outputs["bar"]["formula"] = f;
          r.outputs["bar"]["matches_formula"] = f == b.dim;
          if (f != b.dim) r.code = kViolation;
          s << "rank formula gives " << f << (f == b.dim ? " (agrees)" : " (DISAGREES)") << "\n";
        }
      }
      r.text = s.str();
      return r;
    });

    auto* hk = c->add_subcommand("hk", "H_k(GL_n(Z/p^2, p); F_p) as an FI-module file, k = 1, 2");
    hk->add_option("--k", A.k)->required();
    hk->add_option("--p", A.p)->required();
    hk->add_option("--N", A.N, "window width")->capture_default_str();
    on(hk, [this] {
      const auto M = congruence::hk_fi_module(ca_.k, ca_.p, ca_.N);
      Result r;
      r.inputs = {{"k", ca_.k}, {"p", ca_.p}, {"N", ca_.N}};
      r.outputs = {{"dims", M.dims()}};
      r.artifact = fi::encode(M);
      r.text = "H_" + std::to_string(ca_.k) + " dims " + detail::join(M.dims()) + "\n";
      return r;
    });

    auto* ab = c->add_subcommand("appB", "compare measured invariants of H_k with the congruence bounds");
    ab->add_option("--k", A.k)->required();
    ab->add_option("--p", A.p)->required();
    ab->add_option("--N", A.N, "window width")->capture_default_str();
    on(ab, [this] {
      const auto a = congruence::application_b_empirical(ca_.k, ca_.p, ca_.N);
      Result r;
      r.inputs = {{"k", ca_.k}, {"p", ca_.p}, {"N", ca_.N}, {"d", 0}};
      r.outputs = congruence::to_json(a);
      r.code = a.pass() ? kOk : kViolation;
      std::ostringstream s;
      s << "dims " << detail::join(a.dims) << "\n"
        << "delta = " << a.delta.value << (a.delta.certified ? "" : " (uncertified)") << " <= "
        << a.bound.at("delta") << (a.delta_ok ? "" : "  VIOLATED") << "\n"
        << "t0 = " << a.t0 << " <= " << a.bound.at("t0") << (a.t0_ok ? "" : "  VIOLATED") << "\n"
        << "polynomial of degree " << a.fit.degree << " from n = " << a.fit.onset << ", onset <= "
        << a.bound.at("hmax") + 1 << (a.onset_ok ? "" : "  VIOLATED") << "\n";
      r.text = s.str();
      return r;
    });

    auto* tc = c->add_subcommand("theoremC", "FI-hyperhomology of group chains against equivariant SPB homology");
    tc->add_option("--p", A.p)->required();
    tc->add_option("--ell", A.ell)->capture_default_str();
    tc->add_option("--n", A.n)->required();
    tc->add_option("--k", A.k)->required();
    on(tc, [this] {
      const auto t = congruence::theoremC_check(ca_.p, ca_.ell, ca_.n, ca_.k);
      Result r;
      r.inputs = {{"p", ca_.p}, {"ell", ca_.ell}, {"n", ca_.n}, {"k", ca_.k}};
      r.outputs = congruence::to_json(t);
      r.code = t.equal() ? kOk : kViolation;
      r.text = "lhs = " + std::to_string(t.lhs) + ", rhs = " + std::to_string(t.rhs) +
               (t.equal() ? " (equal)\n" : " (DIFFERENT)\n");
      return r;
    });
  }

 public:
  void add_top_level_verify() { add_verify(&app_); }
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Cli c;
  c.add_top_level_verify();
  return c.run(argc, argv, out, err);
}

}  // namespace fistab::cli
