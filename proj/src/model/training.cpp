#include "incde/model/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "incde/core/errors.hpp"
#include "incde/core/parallel.hpp"
#include "incde/core/rng.hpp"

namespace incde::model {

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
  if (batch_size <= 0) throw ConfigError("train: batch_size must be positive");
  if (patience < 0) throw ConfigError("train: patience must be >= 0");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw ConfigError("train: test_fraction must lie in [0, 1)");
  schedule.validate();
  solver.validate();
}

SequenceSet SequenceSet::from(const datagen::Dataset& ds, const datagen::NormConstants& norm) {
  ds.check_shapes();
  SequenceSet out;
  const mech::Vec6 scale = norm.strain_scale();
  for (int i = 0; i < ds.n_samples; ++i) {
    out.strain.push_back(ds.strain_series(i) * scale.asDiagonal());
    Eigen::MatrixXd y(ds.n_steps, datagen::output_dim(ds.mode));
    const SeriesMatrix s = ds.stress_series(i);
    for (int t = 0; t < ds.n_steps; ++t) y.row(t) = norm.normalize_stress(s.row(t).transpose(), ds.mode).transpose();
    out.target.push_back(std::move(y));
  }
  return out;
}

std::pair<std::vector<int>, std::vector<int>> split_indices(int n, double test_fraction, std::uint64_t seed) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed, 0x5b117);
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.uniform_int(0, i)]);
  const int n_test = static_cast<int>(std::lround(test_fraction * n));
  std::vector<int> test(idx.begin(), idx.begin() + n_test);
  std::vector<int> train(idx.begin() + n_test, idx.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

namespace {

Matrix gather(const std::vector<Matrix>& src, const std::vector<int>& idx, std::size_t lo, std::size_t hi, int t) {
  Matrix out(static_cast<Eigen::Index>(hi - lo), src.front().cols());
  for (std::size_t b = lo; b < hi; ++b) out.row(static_cast<Eigen::Index>(b - lo)) = src[idx[b]].row(t);
  return out;
}

// Sum over rows [lo, hi) of idx and all steps of the squared output error;
// when `trainable` is set (it must alias `model`), adds d(sum * weight)/d(params)
// to its gradients.
double chunk_pass(const IncdeModel& model, IncdeModel* trainable, const SequenceSet& data,
                  const std::vector<int>& idx, std::size_t lo, std::size_t hi, const SolverConfig& solver,
                  double weight) {
  const int S = data.steps();
  const int H = model.hidden_size();
  const auto B = static_cast<Eigen::Index>(hi - lo);
  std::vector<Matrix> Zs;
  Zs.reserve(static_cast<std::size_t>(S));
  Zs.push_back(Matrix::Zero(B, H));
  double sum = 0.0;

  Matrix e_prev = gather(data.strain, idx, lo, hi, 0);
  sum += (model.decode(Zs[0], e_prev) - gather(data.target, idx, lo, hi, 0)).squaredNorm();
  for (int t = 1; t < S; ++t) {
    const Matrix e = gather(data.strain, idx, lo, hi, t);
    Zs.push_back(model.step(Zs.back(), e_prev, e - e_prev, solver));
    sum += (model.decode(Zs.back(), e) - gather(data.target, idx, lo, hi, t)).squaredNorm();
    e_prev = e;
  }
  if (!std::isfinite(sum)) throw NumericalError("non-finite loss");
  if (!trainable) return sum;

  // Reverse sweep, one recorded step at a time (hidden states are the
  // checkpoints): seeds are the step loss and the adjoint of Z carried back.
  Matrix gZ = Matrix::Zero(B, H);
  for (int t = S - 1; t >= 1; --t) {
    Tape tape;
    const Matrix e0 = gather(data.strain, idx, lo, hi, t - 1);
    const Matrix e1 = gather(data.strain, idx, lo, hi, t);
    const Var z0 = tape.input(Zs[t - 1]);
    const Var v0 = tape.constant(e0);
    const Var v1 = tape.constant(e1);
    const Var de = tape.constant(e1 - e0);
    const Var z1 = trainable->step_trainable(tape, z0, v0, de, solver);
    const Var y = trainable->decode_trainable(tape, z1, v1);
    const Var l = tape.sum_squares(tape.sub(y, tape.constant(gather(data.target, idx, lo, hi, t))));
    tape.seed_scalar(l, weight);
    tape.seed(z1, gZ);
    tape.backward();
    gZ = tape.grad(z0);
  }
  Tape tape;
  const Var z0 = tape.input(Zs[0]);
  const Var y = trainable->decode_trainable(tape, z0, tape.constant(gather(data.strain, idx, lo, hi, 0)));
  const Var l = tape.sum_squares(tape.sub(y, tape.constant(gather(data.target, idx, lo, hi, 0))));
  tape.seed_scalar(l, weight);
  tape.backward();
  return sum;
}

// Contiguous chunk boundaries, one per worker.
std::vector<std::size_t> chunk_bounds(std::size_t n, std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::size_t> b{0};
  for (std::size_t w = 1; w <= workers; ++w) b.push_back(n * w / workers);
  return b;
}

}  // namespace

double loss_and_gradient(IncdeModel& model, const SequenceSet& data, const std::vector<int>& idx,
                         const SolverConfig& solver) {
  if (idx.empty()) throw ConfigError("loss_and_gradient: empty batch");
  const double weight = 1.0 / (static_cast<double>(idx.size()) * data.steps());
  auto params = model.parameters();
  for (auto* p : params) p->zero_grad();

  const auto bounds = chunk_bounds(idx.size(), thread_count());
  const std::size_t W = bounds.size() - 1;
  if (W == 1) return weight * chunk_pass(model, &model, data, idx, 0, idx.size(), solver, weight);

  // Each worker differentiates its own copy; gradients are reduced in
  // worker order so results depend only on the thread count.
  std::vector<IncdeModel> replicas(W, model);
  std::vector<double> sums(W, 0.0);
  parallel_for(W, [&](std::size_t w) {
    for (auto* p : replicas[w].parameters()) p->zero_grad();
    sums[w] = chunk_pass(replicas[w], &replicas[w], data, idx, bounds[w], bounds[w + 1], solver, weight);
  });
  double sum = 0.0;
  for (std::size_t w = 0; w < W; ++w) {
    sum += sums[w];
    const auto rp = replicas[w].parameters();
    for (std::size_t k = 0; k < params.size(); ++k) params[k]->grad += rp[k]->grad;
  }
  return weight * sum;
}

double evaluate_mse(const IncdeModel& model, const SequenceSet& data, const SolverConfig& solver, int batch_size) {
  if (data.size() == 0) throw ConfigError("evaluate_mse: empty dataset");
  std::vector<int> idx(static_cast<std::size_t>(data.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s < idx.size(); s += static_cast<std::size_t>(batch_size)) starts.push_back(s);
  std::vector<double> sums(starts.size(), 0.0);
  parallel_for(starts.size(), [&](std::size_t k) {
    sums[k] = chunk_pass(model, nullptr, data, idx, starts[k], std::min(idx.size(), starts[k] + batch_size), solver,
                         0.0);
  });
  return std::accumulate(sums.begin(), sums.end(), 0.0) / (static_cast<double>(data.size()) * data.steps());
}

double zero_predictor_mse(const SequenceSet& data) {
  if (data.size() == 0) throw ConfigError("zero_predictor_mse: empty dataset");
  double s = 0.0;
  for (const auto& y : data.target) s += y.squaredNorm();
  return s / (static_cast<double>(data.size()) * data.steps());
}

TrainResult train(IncdeModel& model, const SequenceSet& train_set, const SequenceSet& test_set,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  if (train_set.size() == 0) throw ConfigError("train: empty training set");
  auto params = model.parameters();
  nn::Adam adam(params);
  nn::EarlyStopping stopper(cfg.patience);
  std::vector<Matrix> best = nn::snapshot(params);
  const bool have_test = test_set.size() > 0;

  TrainResult result;
  if (have_test) result.zero_predictor_test_loss = zero_predictor_mse(test_set);

  std::vector<int> order(static_cast<std::size_t>(train_set.size()));
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(cfg.seed, 0xe90c0000ULL + static_cast<std::uint64_t>(epoch));
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);

    const double lr = cfg.schedule.at(epoch);
    double train_sum = 0.0;
    for (std::size_t s = 0; s < order.size(); s += static_cast<std::size_t>(cfg.batch_size)) {
      const std::vector<int> batch(order.begin() + static_cast<std::ptrdiff_t>(s),
                                   order.begin() + static_cast<std::ptrdiff_t>(
                                                       std::min(order.size(), s + cfg.batch_size)));
      double loss;
      try {
        loss = loss_and_gradient(model, train_set, batch, cfg.solver);
      } catch (const NumericalError& e) {
        throw NumericalError("training epoch " + std::to_string(epoch) + ": " + e.what());
      }
      train_sum += loss * static_cast<double>(batch.size());
      adam.step(lr);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.train_loss = train_sum / static_cast<double>(order.size());
    rec.test_loss = have_test ? evaluate_mse(model, test_set, cfg.solver) : rec.train_loss;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (stopper.update(epoch, rec.test_loss)) best = nn::snapshot(params);
    if (have_test && stopper.should_stop()) {
      result.stopped_early = true;
      break;
    }
  }
  if (!result.history.empty()) nn::restore(params, best);
  result.best_epoch = stopper.best_epoch();
  result.best_test_loss = stopper.best_loss();
  return result;
}

TrainResult train(IncdeModel& model, const datagen::Dataset& ds, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  const auto [tr, te] = split_indices(ds.n_samples, cfg.test_fraction, cfg.seed);
  const SequenceSet all = SequenceSet::from(ds, model.norm());
  SequenceSet a, b;
  for (int i : tr) {
    a.strain.push_back(all.strain[i]);
    a.target.push_back(all.target[i]);
  }
  for (int i : te) {
    b.strain.push_back(all.strain[i]);
    b.target.push_back(all.target[i]);
  }
  return train(model, a, b, cfg, on_epoch);
}

}  // namespace incde::model
