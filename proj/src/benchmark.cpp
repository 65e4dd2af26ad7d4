// Licensed under the Apache License 2.0 (see LICENSE file).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "ytx/error.hpp"
#include "ytx/eval.hpp"

namespace ytx::eval {

namespace {

struct TaskResult {
  double rse = 0.0;
  double smape = 0.0;
  std::size_t clamped = 0;
  bool converged = true;
  std::optional<std::string> error;
};

LinearModel fit_model(const ModelSpec& spec, const Matrix& x, std::span<const double> y) {
  switch (spec.kind) {
    case ModelKind::ridge:
      return fit_ridge(x, y, spec.alpha);
    case ModelKind::lasso:
      return fit_lasso(x, y, spec.alpha);
    default:
      throw ConfigError("model '" + std::string(to_string(spec.kind)) + "' is not implemented by this runner");
  }
}

void check_roles(TransformKind kind, const Dataset& data, const FitOptions& fit) {
  auto need = [&](bool ok, const char* role) {
    if (!ok) throw ConfigError(std::string(to_string(kind)) + " needs the " + role + " role");
  };
  switch (kind) {
    case TransformKind::subject_center: need(!data.subject_keys.empty(), "subject"); break;
    case TransformKind::trial_minmax: need(!data.trial_keys.empty(), "trial"); break;
    case TransformKind::frame: need(!data.frame.empty(), "frame"); break;
    case TransformKind::deflate:
      need(!data.time_keys.empty(), "time");
      need(fit.deflation_index.has_value() || !data.price_index.empty(), "price_index");
      break;
    case TransformKind::expectation_norm:
    case TransformKind::regression_norm:
      need(!data.context.empty(), "context");
      break;
    default:
      break;
  }
}

}  // namespace

MetricSummary summarize(std::vector<double> per_fold) {
  MetricSummary s;
  s.folds = std::move(per_fold);
  const double n = static_cast<double>(s.folds.size());
  if (s.folds.empty()) return s;
  s.mean = std::accumulate(s.folds.begin(), s.folds.end(), 0.0) / n;
  if (s.folds.size() > 1) {
    double ss = 0.0;
    for (double v : s.folds) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

const BenchmarkCell* BenchmarkReport::find(std::string_view model, std::string_view transform) const {
  for (const auto& c : cells) {
    if (c.model == model && c.transform == transform) return &c;
  }
  return nullptr;
}

FoldArtifacts evaluate_fold(const Dataset& data, const Fold& fold, const ModelSpec& model, TransformKind kind,
                            const FitOptions& fit) {
  const Dataset train = data.subset(fold.train);
  const Dataset test = data.subset(fold.test);
  FittedTransform transform = fit_transform(kind, train, fit);
  const auto z = transform.forward(train.target, train.row_context());
  LinearModel m = fit_model(model, train.features, z);
  const auto predicted = m.predict(test.features);
  std::size_t clamped = 0;
  auto restored = transform.inverse_clamped(predicted, test.row_context(), clamped);
  return {std::move(transform), std::move(m), std::move(restored), clamped};
}

BenchmarkReport run_benchmark(const Dataset& data, std::span<const ModelSpec> models,
                              std::span<const TransformKind> transforms, std::uint64_t seed,
                              const BenchmarkOptions& options) {
  if (models.empty()) throw ConfigError("benchmark needs at least one model");
  for (const auto& m : models) {
    if (m.kind != ModelKind::ridge && m.kind != ModelKind::lasso) {
      throw ConfigError("model '" + std::string(to_string(m.kind)) + "' is not implemented by this runner");
    }
  }
  std::vector<TransformKind> kinds{TransformKind::identity};
  for (auto k : transforms) {
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  for (auto k : kinds) check_roles(k, data, options.fit);

  const FoldPlan plan = make_fold_plan(data.rows(), seed);
  const std::size_t nfolds = plan.folds.size();
  const std::size_t ncells = models.size() * kinds.size();
  std::vector<TaskResult> results(ncells * nfolds);

  auto run_task = [&](std::size_t task) {
    const std::size_t cell = task / nfolds;
    const std::size_t f = task % nfolds;
    const auto& spec = models[cell / kinds.size()];
    const auto kind = kinds[cell % kinds.size()];
    const auto& fold = plan.folds[f];
    TaskResult& out = results[task];
    try {
      auto art = evaluate_fold(data, fold, spec, kind, options.fit);
      std::vector<double> actual(fold.test.size());
      for (std::size_t i = 0; i < fold.test.size(); ++i) actual[i] = data.target[fold.test[i]];
      out.rse = rse(actual, art.predictions);
      out.smape = smape(actual, art.predictions);
      out.clamped = art.clamped;
      out.converged = art.model.converged;
    } catch (const Error& e) {
      out.error = e.what();
    }
  };

  const std::size_t total = results.size();
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, total);
  if (threads == 1) {
    for (std::size_t t = 0; t < total; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < total; t = next++) run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  BenchmarkReport report;
  report.dataset = options.dataset_name;
  report.rows = data.rows();
  report.features = data.cols();
  report.seed = seed;
  report.models.assign(models.begin(), models.end());
  for (auto k : kinds) report.transforms.emplace_back(to_string(k));

  for (std::size_t cell = 0; cell < ncells; ++cell) {
    const auto& spec = models[cell / kinds.size()];
    BenchmarkCell c;
    c.model = std::string(to_string(spec.kind));
    c.alpha = spec.alpha;
    c.transform = std::string(to_string(kinds[cell % kinds.size()]));
    std::vector<double> rse_folds, smape_folds;
    for (std::size_t f = 0; f < nfolds; ++f) {
      const auto& r = results[cell * nfolds + f];
      if (r.error) {
        c.error = "fold " + std::to_string(f) + ": " + *r.error;
        break;
      }
      rse_folds.push_back(r.rse);
      smape_folds.push_back(r.smape);
      c.clamped += r.clamped;
      if (!r.converged) ++c.nonconverged_folds;
    }
    if (!c.error) {
      c.rse = summarize(std::move(rse_folds));
      c.smape = summarize(std::move(smape_folds));
      if (c.nonconverged_folds > 0) {
        report.warnings.push_back(c.model + "/" + c.transform + ": " + std::to_string(c.nonconverged_folds) +
                                  " fold(s) did not converge");
      }
      if (c.clamped > 0) {
        report.warnings.push_back(c.model + "/" + c.transform + ": " + std::to_string(c.clamped) +
                                  " prediction(s) clamped to the invertible range");
      }
    } else {
      report.warnings.push_back(c.model + "/" + c.transform + " failed: " + *c.error);
    }
    report.cells.push_back(std::move(c));
  }
  return report;
}

}  // namespace ytx::eval
