#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fistab/bounds/formulas.hpp"
#include "fistab/fi/construct.hpp"
#include "fistab/fi/functors.hpp"
#include "fistab/homology/hyper.hpp"
#include "fistab/homology/invariants.hpp"

namespace fistab::bounds {

struct AuditConfig {
  std::uint64_t seed = 1;
  int modules = 60;
  int maps = 30;
  int complexes = 30;
  std::vector<std::uint32_t> primes{2, 3};
  int N = 8;
  int threads = 0;  // 0: hardware concurrency
};

struct AuditViolation {
  std::string instance;
  std::string inequality;
  Int lhs = 0, rhs = 0;
};

struct AuditResult {
  int instances = 0;  // evaluated, i.e. certified
  int skipped = 0;    // uncertified or window too short
  std::size_t checks = 0;
  std::vector<AuditViolation> violations;
  std::vector<std::string> skip_reasons;
};

namespace detail {

struct Ledger {
  std::string id;
  std::size_t checks = 0;
  std::vector<AuditViolation> violations;
  bool skipped = false;
  std::string skip_reason;

  // Invariants take values >= -1, with -1 meaning "vanishes"; a bound below -1
  // asserts exactly that.
  void le(const std::string& what, Int lhs, Int rhs) {
    ++checks;
    if (lhs > std::max<Int>(rhs, -1)) violations.push_back({id, what, lhs, rhs});
  }
  void eq(const std::string& what, Int lhs, Int rhs) {
    ++checks;
    if (lhs != rhs) violations.push_back({id, what, lhs, rhs});
  }
  void skip(std::string why) {
    skipped = true;
    skip_reason = id + ": " + std::move(why);
  }
};

struct Inv {
  Int t0, t1, delta, hmax;
  bool certified;
};

inline Inv measure(const fi::TruncatedFIModule& M) {
  const auto r = homology::invariants(M, 1);
  return {r.t0, r.t1, r.delta.value, r.hmax.value, r.certified};
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t family, std::uint64_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(i)};
  std::uint32_t w[2];
  seq.generate(w, w + 2);
  return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline fi::FreeSpec random_free_spec(std::mt19937_64& rng, int max_deg, int max_count) {
  fi::FreeSpec s;
  const int c = uniform(rng, 1, max_count);
  for (int i = 0; i < c; ++i) s.degrees.push_back(uniform(rng, 0, max_deg));
  std::sort(s.degrees.begin(), s.degrees.end());
  return s;
}

inline fi::TruncatedFIModule random_target(std::mt19937_64& rng, std::uint32_t p, int N) {
  if (uniform(rng, 0, 2) == 0) return fi::free_sum(p, random_free_spec(rng, 1, 2), N);
  fi::RandomPresentedSpec spec;
  spec.seed = rng();
  spec.p = p;
  spec.gen_deg = uniform(rng, 0, 2);
  spec.rel_deg = std::min(N, spec.gen_deg + uniform(rng, 0, 2));
  spec.N = N;
  spec.gen_count = uniform(rng, 1, 3);
  spec.rel_count = uniform(rng, 0, 3);
  return fi::random_presented(spec);
}

// A random map out of a free module, with generator images in the given
// subspaces (the whole target when `allowed` is empty).
inline fi::FIMap random_free_map(std::mt19937_64& rng, const fi::FreeSpec& s, const fi::TruncatedFIModule& target,
                                 const std::vector<exactlin::Subspace>& allowed = {}) {
  std::vector<exactlin::Vec> images;
  for (int d : s.degrees) {
    if (allowed.empty()) {
      images.push_back(fi::random_vector(rng, target.dim(d), target.p()));
      continue;
    }
    const auto B = allowed[d].basis_columns();
    const exactlin::Vec c = fi::random_vector(rng, B.cols(), target.p());
    images.push_back(B.apply(c));
  }
  return fi::free_map(s, target, images);
}

inline void module_instance(const AuditConfig& cfg, int i, Ledger& L) {
  std::mt19937_64 rng(mix(cfg.seed, 1, i));
  const std::uint32_t p = cfg.primes[i % cfg.primes.size()];
  fi::RandomPresentedSpec spec;
  spec.seed = rng();
  spec.p = p;
  spec.gen_deg = uniform(rng, 0, 2);
  spec.rel_deg = std::min(cfg.N, spec.gen_deg + uniform(rng, 0, 3));
  spec.N = cfg.N;
  spec.gen_count = uniform(rng, 1, 3);
  spec.rel_count = uniform(rng, 0, 4);
  const auto M = fi::random_presented(spec);
  const Inv m = measure(M);
  if (!m.certified) return L.skip("invariants not certified");
  L.le("delta <= t0", m.delta, m.t0);
  L.le("hmax <= t0 + max(t0, t1) - 1", m.hmax, star_bounds(StarMode::from_t0_t1, m.t0, m.t1).at("hmax"));
  const auto st = star_bounds(StarMode::from_delta_hmax, m.delta, m.hmax);
  L.le("t0 <= delta + hmax + 1", m.t0, st.at("t0"));
  L.le("t1 <= delta + 2*hmax + 2", m.t1, st.at("t1"));
  for (int a = 1; a <= 2; ++a) {
    const auto Q = fi::derivative(M, a);
    const auto dq = homology::stable_degree(Q);
    if (!dq.certified) continue;
    L.eq("delta(Q_" + std::to_string(a) + " M) = max(delta(M) - 1, -1)", dq.value, std::max<Int>(m.delta - 1, -1));
  }
}

inline void map_instance(const AuditConfig& cfg, int i, Ledger& L) {
  std::mt19937_64 rng(mix(cfg.seed, 2, i));
  const std::uint32_t p = cfg.primes[i % cfg.primes.size()];
  const auto B = random_target(rng, p, cfg.N);
  const auto spec = random_free_spec(rng, 2, 2);
  const auto f = random_free_map(rng, spec, B);
  const auto K = fi::kernel(f), I = fi::image(f), Q = fi::cokernel(f);
  const Inv a = measure(f.source), b = measure(B), k = measure(K), im = measure(I), q = measure(Q);
  if (!(a.certified && b.certified && k.certified && im.certified && q.certified))
    return L.skip("invariants not certified");
  const auto kc = kercoker_bounds(a.delta, a.hmax, b.delta, b.hmax);
  L.le("delta(ker) <= delta(A)", k.delta, kc.at("delta_ker"));
  L.le("delta(coker) <= delta(B)", q.delta, kc.at("delta_coker"));
  L.le("hmax(ker) <= max(2 delta(A) - 2, hmax(A), hmax(B))", k.hmax, kc.at("hmax_ker"));
  L.le("hmax(coker) <= max(2 delta(A) - 2, hmax(A), hmax(B))", q.hmax, kc.at("hmax_coker"));
  L.eq("delta(A) = max(delta(ker), delta(im))", a.delta, std::max(k.delta, im.delta));
  L.eq("delta(B) = max(delta(im), delta(coker))", b.delta, std::max(im.delta, q.delta));
  L.le("delta(im) <= delta(A)", im.delta, a.delta);
  L.le("delta(im) <= delta(B)", im.delta, b.delta);
  L.le("hmax(A) <= max(hmax(ker), hmax(im))", a.hmax, std::max(k.hmax, im.hmax));
  L.le("hmax(B) <= max(hmax(im), hmax(coker))", b.hmax, std::max(im.hmax, q.hmax));
}

// Two- or three-term complexes of the form F2 -> F1 -> B with F1, F2 free.
inline void complex_instance(const AuditConfig& cfg, int i, Ledger& L) {
  std::mt19937_64 rng(mix(cfg.seed, 3, i));
  const std::uint32_t p = cfg.primes[i % cfg.primes.size()];
  const auto B = random_target(rng, p, cfg.N);
  const auto f = random_free_map(rng, random_free_spec(rng, 2, 2), B);
  fi::FIComplexWindow C;
  C.jmin = 0;
  C.modules = {B, f.source};
  C.differentials = {f.maps};
  if (uniform(rng, 0, 1)) {
    const auto g = random_free_map(rng, random_free_spec(rng, 2, 2), f.source, fi::kernel_subspaces(f));
    C.modules.push_back(g.source);
    C.differentials.push_back(g.maps);
  }
  C.jmax = static_cast<int>(C.modules.size()) - 1;
  const auto T = homology::hyper_fi_homology(C, C.jmax);
  auto S = C;
  for (int s = 1; s <= 2; ++s) {
    S = fi::shift(S);
    const auto TS = homology::hyper_fi_homology(S, S.jmax);
    for (int k = C.jmin; k <= C.jmax; ++k)
      L.le("t_" + std::to_string(k) + "(Sigma^" + std::to_string(s) + " C) <= t_" + std::to_string(k) + "(C)",
           TS.degree(k), T.degree(k));
  }
  for (int k = C.jmin; k <= C.jmax; ++k) {
    const Int tk = T.degree(k);
    if (tk >= cfg.N) continue;  // the top of the window may hide larger degrees
    const auto H = fi::complex_homology(C, k);
    const auto d = homology::stable_degree(H);
    if (!d.certified) continue;
    L.le("delta(H_" + std::to_string(k) + ") <= t_" + std::to_string(k), d.value, tk);
  }
}

}  // namespace detail

// Runs the seeded suite. Families: random presented modules, maps out of free
// modules, and short complexes of free modules. Instances whose invariants are
// not certified on the window are counted as skipped, never as passing.
inline AuditResult audit(const AuditConfig& cfg) {
  if (cfg.N < 2) throw InputError("audit needs N >= 2");
  if (cfg.primes.empty()) throw InputError("audit needs at least one prime");
  for (auto p : cfg.primes)
    if (!exactlin::is_prime(p)) throw InputError("modulus must be prime");
  struct Job {
    int family, index;
  };
  std::vector<Job> jobs;
  for (int i = 0; i < cfg.modules; ++i) jobs.push_back({1, i});
  for (int i = 0; i < cfg.maps; ++i) jobs.push_back({2, i});
  for (int i = 0; i < cfg.complexes; ++i) jobs.push_back({3, i});
  std::vector<detail::Ledger> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      auto& L = out[j];
      static const char* names[] = {"", "module", "map", "complex"};
      L.id = std::string(names[jobs[j].family]) + "#" + std::to_string(jobs[j].index);
      try {
        if (jobs[j].family == 1) detail::module_instance(cfg, jobs[j].index, L);
        if (jobs[j].family == 2) detail::map_instance(cfg, jobs[j].index, L);
        if (jobs[j].family == 3) detail::complex_instance(cfg, jobs[j].index, L);
      } catch (const WindowExhausted& e) {
        L.skip(e.what());
      } catch (const NoFit& e) {
        L.skip(e.what());
      }
    }
  };
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int nt = std::max(1, std::min<int>(cfg.threads > 0 ? cfg.threads : hw, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  AuditResult r;
  for (auto& L : out) {
    if (L.skipped) {
      ++r.skipped;
      r.skip_reasons.push_back(L.skip_reason);
      continue;
    }
    ++r.instances;
    r.checks += L.checks;
    for (auto& v : L.violations) r.violations.push_back(std::move(v));
  }
  return r;
}

inline json to_json(const AuditResult& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"instance", x.instance}, {"inequality", x.inequality}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  return {{"instances", r.instances}, {"skipped", r.skipped}, {"checks", r.checks}, {"violations", v}};
}

}  // namespace fistab::bounds
