#include "catdag/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "catdag/causal.hpp"
#include "catdag/errors.hpp"
#include "catdag/mcmc.hpp"
#include "catdag/random.hpp"
#include "catdag/simgen.hpp"
#include "catdag/summaries.hpp"

namespace catdag {

void ScenarioConfig::validate() const {
  if (q < 2) throw ConfigError("simulation needs q >= 2");
  if (n == 0) throw ConfigError("simulation needs n >= 1");
  if (replicates == 0) throw ConfigError("simulation needs at least one replicate");
  const double p = effective_edge_prob();
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("edge probability must lie in (0, 1)");
  if (effective_burn_in() >= effective_iterations()) throw ConfigError("burn-in must be smaller than iterations");
  if (truth_mc_draws < 100) throw ConfigError("true-effect Monte Carlo needs at least 100 draws");
  hyper.validate();
  dag_prior.validate();
}

namespace {

// Independent streams derived from the replicate seed.
enum Stream : std::uint64_t { kStructure = 1, kData = 2, kChain = 3, kTruth = 4 };

}  // namespace

ReplicateResult run_replicate(const ScenarioConfig& config, std::size_t replicate) {
  config.validate();
  ReplicateResult r;
  r.q = config.q;
  r.n = config.n;
  r.replicate = replicate;
  r.seed = config.seed + replicate;

  Rng structure_rng(mix_seed(r.seed, kStructure));
  r.truth = random_dag(config.q, config.effective_edge_prob(), structure_rng);
  const GaussianSem sem = random_sem(r.truth, structure_rng);

  Rng data_rng(mix_seed(mix_seed(r.seed, kData), config.n));
  const Dataset ds = sample_binary(sem, config.n, data_rng);

  McmcConfig mc;
  mc.iterations = config.effective_iterations();
  mc.burn_in = config.effective_burn_in();
  mc.seed = mix_seed(mix_seed(r.seed, kChain), config.n);
  mc.hyper = config.hyper;
  mc.dag_prior = config.dag_prior;
  std::vector<CausalQuery> queries;
  for (int v = 1; v < config.q; ++v) queries.push_back({0, v, 1, 0, 1});
  const Trace trace = run_chain(ds, mc);
  r.acceptance_rate = trace.acceptance_rate();

  const PpiMatrix p = ppi(trace);
  const DirectedGraph est = mpm(p);
  r.mpm_edges = est.edges;
  r.mpm_cyclic = est.cyclic;
  const Dag est_dag = est.cyclic ? repair_cycles(est, p) : Dag::from_edges(config.q, est.edges);
  const Cpdag est_cpdag = to_cpdag(est_dag);
  const Cpdag true_cpdag = to_cpdag(r.truth);
  r.shd = shd(est_cpdag, true_cpdag);
  const auto truth_edges = r.truth.edges();
  const SenSpe ss = sen_spe(est.edges, truth_edges, config.q);
  r.sen = ss.sen;
  r.spe = ss.spe;
  r.sen_undefined = ss.sen_undefined;
  r.spe_undefined = ss.spe_undefined;
  const SenSpe cs = sen_spe(est_cpdag, true_cpdag);
  r.sen_cpdag = cs.sen;
  r.spe_cpdag = cs.spe;

  const auto estimates = bma_estimates(trace, queries);
  Rng truth_rng(mix_seed(r.seed, kTruth));
  double ae_sum = 0.0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const TrueEffect c = true_causal_effect(sem, queries[i].treatment, 0, config.truth_mc_draws, truth_rng);
    r.true_effect.push_back(c.value);
    r.true_effect_se.push_back(c.std_error);
    r.estimate.push_back(estimates[i].mean);
    r.abs_error.push_back(abs_error(c.value, estimates[i].mean));
    ae_sum += r.abs_error.back();
  }
  r.mean_abs_error = ae_sum / static_cast<double>(queries.size());
  return r;
}

std::vector<ReplicateResult> run_scenario(const ScenarioConfig& config) {
  config.validate();
  std::vector<ReplicateResult> results(config.replicates);
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(config.replicates, config.threads ? config.threads : hw);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto work = [&] {
    for (std::size_t r = next++; r < config.replicates; r = next++) {
      try {
        results[r] = run_replicate(config, r);
      } catch (...) {
        const std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& x) {
  if (x.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

}  // namespace

ScenarioSummary aggregate(const std::vector<ReplicateResult>& results) {
  if (results.empty()) throw InputError("cannot aggregate zero replicates");
  ScenarioSummary s;
  s.q = results.front().q;
  s.n = results.front().n;
  s.replicates = results.size();
  std::vector<double> shd_v, sen_v, spe_v, ae_v, sen_c, spe_c;
  for (const auto& r : results) {
    shd_v.push_back(r.shd);
    sen_v.push_back(100.0 * r.sen);
    spe_v.push_back(100.0 * r.spe);
    ae_v.push_back(100.0 * r.mean_abs_error);
    sen_c.push_back(100.0 * r.sen_cpdag);
    spe_c.push_back(100.0 * r.spe_cpdag);
  }
  std::tie(s.shd, s.shd_sd) = mean_sd(shd_v);
  std::tie(s.sen, s.sen_sd) = mean_sd(sen_v);
  std::tie(s.spe, s.spe_sd) = mean_sd(spe_v);
  std::tie(s.ae, s.ae_sd) = mean_sd(ae_v);
  s.sen_cpdag = mean_sd(sen_c).first;
  s.spe_cpdag = mean_sd(spe_c).first;
  return s;
}

void write_replicates_csv(std::ostream& out, const std::vector<ReplicateResult>& results) {
  const auto old_precision = out.precision(17);
  const int q = results.empty() ? 0 : results.front().q;
  out << "q,n,replicate,seed,SHD,SEN,SPE,SEN_undefined,SPE_undefined,SEN_cpdag,SPE_cpdag,mpm_cyclic,acceptance_rate,AE_mean";
  for (int v = 2; v <= q; ++v) out << ",AE_" << v;
  for (int v = 2; v <= q; ++v) out << ",true_" << v;
  for (int v = 2; v <= q; ++v) out << ",bma_" << v;
  out << '\n';
  for (const auto& r : results) {
    out << r.q << ',' << r.n << ',' << r.replicate << ',' << r.seed << ',' << r.shd << ',' << r.sen << ','
        << r.spe << ',' << r.sen_undefined << ',' << r.spe_undefined << ',' << r.sen_cpdag << ',' << r.spe_cpdag << ',' << r.mpm_cyclic << ','
        << r.acceptance_rate << ',' << r.mean_abs_error;
    for (double x : r.abs_error) out << ',' << x;
    for (double x : r.true_effect) out << ',' << x;
    for (double x : r.estimate) out << ',' << x;
    out << '\n';
  }
  out.precision(old_precision);
}

void write_summary_csv(std::ostream& out, const std::vector<ScenarioSummary>& rows) {
  const auto old_precision = out.precision(17);
  out << "q,n,G,SHD,SEN,SPE,AE,SHD_sd,SEN_sd,SPE_sd,AE_sd,SEN_cpdag,SPE_cpdag\n";
  for (const auto& s : rows) {
    out << s.q << ',' << s.n << ',' << s.replicates << ',' << s.shd << ',' << s.sen << ',' << s.spe << ','
        << s.ae << ',' << s.shd_sd << ',' << s.sen_sd << ',' << s.spe_sd << ',' << s.ae_sd << ',' << s.sen_cpdag << ',' << s.spe_cpdag << '\n';
  }
  out.precision(old_precision);
}

}  // namespace catdag
