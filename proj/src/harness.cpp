#include "bwt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bwt/errors.hpp"
#include "bwt/graph_io.hpp"
#include "bwt/oracles.hpp"

namespace bwt {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + v + "'");
  }
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

void apply_config_value(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "n") c.n = static_cast<int>(to_int(key, v));
  else if (key == "p") c.p = to_double(key, v);
  else if (key == "k") c.k = static_cast<int>(to_int(key, v));
  else if (key == "gamma") c.gamma = to_double(key, v);
  else if (key == "Delta") c.Delta = static_cast<int>(to_int(key, v));
  else if (key == "D") c.D = static_cast<int>(to_int(key, v));
  else if (key == "eps") c.eps = to_double(key, v);
  else if (key == "d") c.d = to_double(key, v);
  else if (key == "xi") c.xi = to_double(key, v);
  else if (key == "beta") c.beta = to_double(key, v);
  else if (key == "mu") c.mu = to_double(key, v);
  else if (key == "rho") c.rho = to_double(key, v);
  else if (key == "zeta") c.zeta = to_double(key, v);
  else if (key == "vartheta") c.vartheta = to_double(key, v);
  else if (key == "z") c.z = to_double(key, v);
  else if (key == "nu") c.nu = to_double(key, v);
  else if (key == "budget") c.budget = to_double(key, v);
  else if (key == "embed_restarts") c.embed_restarts = static_cast<int>(to_int(key, v));
  else if (key == "runs") c.runs = static_cast<int>(to_int(key, v));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "guest") c.guest = v;
  else if (key == "adversary") c.adversary = v;
  else if (key == "mode") c.mode = v;
  else if (key == "graph") c.graph_file = v;
  else if (key == "paley_q") c.paley_q = static_cast<int>(to_int(key, v));
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void apply_config_text(ExperimentConfig& cfg, std::istream& is) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
    apply_config_value(cfg, key, value);
  }
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  auto unit = [&](double x, const char* name) {
    if (!(x > 0 && x < 1)) bad(std::string(name) + " must lie in (0,1)");
  };
  if (n < 8) bad("n must be at least 8");
  if (!(p > 0 && p <= 1)) bad("p must lie in (0,1]");
  if (k < 1) bad("k must be at least 1");
  if (!(gamma > 0 && gamma < 1.0 / k)) bad("gamma must lie in (0, 1/k)");
  if (Delta < 2) bad("Delta must be at least 2");
  if (D < 1) bad("D must be at least 1");
  unit(eps, "eps");
  unit(d, "d");
  unit(xi, "xi");
  unit(mu, "mu");
  unit(rho, "rho");
  unit(zeta, "zeta");
  unit(vartheta, "vartheta");
  if (beta < 0 || beta >= 1) bad("beta must lie in [0,1)");
  if (z < 0 || nu < 0) bad("z and nu must be nonnegative");
  if (budget < 0) bad("budget must be nonnegative");
  if (embed_restarts < 0) bad("embed_restarts must be nonnegative");
  if (runs < 1) bad("runs must be at least 1");
  if (mode != "random" && mode != "bijumbled" && mode != "degenerate") bad("unknown mode '" + mode + "'");
  parse_adversary(adversary);
  if (guest.empty()) bad("guest is empty");
  if (mode == "bijumbled" && graph_file.empty() && !is_prime(paley_q > 0 ? paley_q : n))
    bad("bijumbled mode needs a graph file or a prime q = 1 mod 4");
}

std::vector<int> cluster_targets(const std::vector<VertexSet>& clusters, int v0_size) {
  const int cells = static_cast<int>(clusters.size());
  std::vector<int> m(cells);
  for (int c = 0; c < cells; ++c) m[c] = clusters[c].size() + v0_size / cells;
  std::vector<int> order(cells);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return clusters[a].size() < clusters[b].size(); });
  for (int q = 0; q < v0_size % cells; ++q) ++m[order[q]];
  return m;
}

double resolved_beta(const ExperimentConfig& cfg, int bw) {
  if (cfg.beta > 0) return cfg.beta;
  const int k = cfg.k;
  const int len = std::max({32, (3 * k - 2) * bw, 4 * k * bw});
  return (len + 0.5) / (4.0 * k * cfg.n);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

RunRecord run_pipeline(const ExperimentConfig& cfg_in, PipelineArtifacts* art) {
  PipelineArtifacts local;
  PipelineArtifacts& A = art ? *art : local;
  RunRecord rec;
  rec.config = cfg_in;
  ExperimentConfig& cfg = rec.config;
  const auto t_start = Clock::now();
  std::string stage = "config";
  auto t_stage = Clock::now();
  auto enter = [&](const std::string& next) {
    rec.stage_ms[stage] = ms_since(t_stage);
    stage = next;
    t_stage = Clock::now();
  };
  try {
    cfg.validate();
    const std::uint64_t seed = cfg.seed;

    // Host.
    enter("host");
    if (cfg.mode == "bijumbled") {
      if (!cfg.graph_file.empty()) {
        A.host = load_graph(cfg.graph_file);
      } else {
        A.host = paley(cfg.paley_q > 0 ? cfg.paley_q : cfg.n);
        cfg.p = 0.5;
      }
      cfg.n = A.host.n();
      BijumbledMode bm{false, 5000, seed, true};
      BijumbledResult br = bijumbled_check(A.host, cfg.p, 1e18, bm);
      rec.nu_measured = br.worst_ratio;
      const double nu = cfg.nu > 0 ? cfg.nu : br.worst_ratio;
      rec.nu_feasible = bijumbled_feasible(cfg.p, nu, cfg.n);
      if (cfg.nu > 0 && br.worst_ratio > cfg.nu)
        rec.warnings.push_back("host discrepancy " + fmt_double(br.worst_ratio) + " exceeds nu " + fmt_double(cfg.nu));
      if (!rec.nu_feasible) rec.warnings.push_back("measured nu lies in the infeasible regime");
    } else {
      A.host = gnp(cfg.n, cfg.p, seed);
    }
    const int n = cfg.n;
    {
      const double expo = cfg.mode == "degenerate" ? 1.0 / (2 * cfg.D + 1) : 1.0 / cfg.Delta;
      const double pmin = std::pow(std::log(n) / n, expo);
      if (cfg.p < pmin) rec.warnings.push_back("p below the recommended minimum " + fmt_double(pmin));
    }

    enter("adversary");
    {
      AdversaryParams ap;
      ap.strategy = parse_adversary(cfg.adversary);
      ap.gamma = cfg.gamma;
      ap.k = cfg.k;
      ap.p = cfg.p;
      ap.budget = cfg.budget;
      ap.seed = seed;
      A.g = adversary_delete(A.host, ap);
    }

    enter("guest");
    A.guest = make_guest(cfg.guest, n, cfg.k, resolved_beta(cfg, 1), seed);
    const double beta = resolved_beta(cfg, A.guest.bandwidth);
    A.guest = make_guest(cfg.guest, n, cfg.k, beta, seed);

    enter("lemma_g");
    {
      LemmaGParams gp;
      gp.p = cfg.p;
      gp.gamma = cfg.gamma;
      gp.k = cfg.k;
      gp.eps = cfg.eps;
      gp.d = cfg.d;
      gp.seed = seed;
      A.lemma_g = lemma_for_g(A.g, A.host, gp);
    }
    const LemmaGResult& lg = A.lemma_g;
    rec.r = lg.index.r;
    rec.v0_size = lg.V0.size();

    enter("lemma_h");
    {
      LemmaHParams hp;
      hp.k = cfg.k;
      hp.xi = cfg.xi;
      hp.beta = beta;
      hp.z = cfg.z;
      hp.seed = seed;
      hp.strict = false;
      A.assignment = lemma_for_h(A.guest.graph, A.guest.labelling, A.guest.colouring, lg.reduced,
                                 cluster_targets(lg.clusters, lg.V0.size()), hp);
      if (!A.assignment.all_hold()) rec.warnings.push_back("lemma_h: " + A.assignment.violation + " not certified");
    }

    enter("reserve");
    VertexSet S;
    {
      ReserveParams rp;
      rp.mu = cfg.mu;
      rp.eps = cfg.eps;
      rp.p = cfg.p;
      rp.seed = seed;
      S = reserve_set(A.g, A.host, lg.clusters, rp).S;
    }

    enter("pre_embedding");
    {
      PreEmbedParams pp;
      pp.eps = cfg.eps;
      pp.d = cfg.d;
      pp.p = cfg.p;
      pp.mu = cfg.mu;
      pp.zeta = cfg.zeta;
      pp.c4_free = cfg.mode == "degenerate";
      pp.seed = seed;
      A.pre = pre_embed(A.g, A.host, lg.V0, lg.clusters, lg.reduced, A.guest.graph, A.guest.labelling,
                        A.assignment.f, S, pp);
      const int hv = homomorphism_violations(A.guest.graph, A.pre.fstar, lg.reduced);
      if (hv > 0) rec.warnings.push_back("pre_embedding: " + std::to_string(hv) + " non-homomorphic guest edges");
    }

    enter("balancing");
    {
      std::vector<int> targets(lg.index.size(), 0);
      for (int c : A.pre.fstar)
        if (c >= 0) ++targets[c];
      BalanceParams bp;
      bp.eps = cfg.eps;
      bp.d = cfg.d;
      bp.p = cfg.p;
      bp.xi = cfg.xi;
      bp.gamma = cfg.gamma;
      bp.seed = seed;
      A.balanced = balance(A.pre.clusters, targets, lg.reduced, A.g, A.host, bp);
      rec.moved = A.balanced.log.moved_total();
      for (auto& w : A.balanced.warnings) rec.warnings.push_back("balancing: " + w);
    }

    enter("restriction");
    {
      assemble_images(A.pre.restr, A.pre.fstar, A.balanced.clusters, A.g);
      RestrictionParams rp;
      rp.rho = cfg.rho;
      rp.zeta = cfg.zeta;
      rp.Delta = cfg.Delta;
      rp.DeltaJ = cfg.Delta;
      rp.inner_eps = cfg.eps;
      rp.d = cfg.d;
      rp.p = cfg.p;
      RestrictionReport rr = validate_restriction_pair(A.pre.restr, A.guest.graph,
                                                       A.pre.state.domain(A.guest.graph.n()), A.pre.fstar,
                                                       A.balanced.clusters, A.g, A.host, rp);
      for (int q = 0; q < 6; ++q)
        if (!rr.rp[q]) rec.warnings.push_back("restriction: RP" + std::to_string(q + 1) + " not certified");
    }

    enter("embed");
    {
      A.buffers = choose_buffers(A.guest.graph, A.pre.fstar, A.guest.labelling, A.pre.restr, A.assignment.special,
                                 cfg.k, cfg.vartheta);
      EmbedParams ep;
      ep.restarts = cfg.embed_restarts;
      ep.seed = seed;
      A.embedding = embed(A.g, A.balanced.clusters, A.guest.graph, A.pre.fstar, A.pre.restr, A.buffers,
                          A.guest.labelling, A.pre.state.phi, ep);
      rec.embed_retries = A.embedding.restarts_used;
      if (!A.embedding.success) throw StageFailure("embed", A.embedding.failure);
    }

    enter("verify");
    {
      std::string why;
      if (!verify_embedding(A.g, A.guest.graph, A.embedding.phi, A.pre.restr, &why))
        throw StageFailure("verify", why);
    }
    rec.success = true;
  } catch (const StageFailure& e) {
    rec.failure_stage = e.stage();
    rec.failure_message = e.what();
  } catch (const std::exception& e) {
    rec.failure_stage = stage;
    rec.failure_message = e.what();
  }
  rec.stage_ms[stage] = ms_since(t_stage);
  rec.runtime_ms = ms_since(t_start);
  return rec;
}

std::string csv_header() {
  return "seed,n,p,k,gamma,guest,adversary,mode,success,failure_stage,r,v0_size,moved,embed_retries,runtime_ms";
}

std::string csv_row(const RunRecord& rec, bool with_runtime) {
  const ExperimentConfig& c = rec.config;
  std::ostringstream os;
  os << c.seed << ',' << c.n << ',' << fmt_double(c.p) << ',' << c.k << ',' << fmt_double(c.gamma) << ',' << c.guest
     << ',' << c.adversary << ',' << c.mode << ',' << (rec.success ? "true" : "false") << ',' << rec.failure_stage
     << ',' << rec.r << ',' << rec.v0_size << ',' << rec.moved << ',' << rec.embed_retries << ',';
  if (with_runtime) os << static_cast<long long>(std::llround(rec.runtime_ms));
  return os.str();
}

}  // namespace bwt
