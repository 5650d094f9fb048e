#include "incde/nn/adam.hpp"

#include <cmath>

#include "incde/core/errors.hpp"

namespace incde::nn {

Adam::Adam(std::vector<Parameter*> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  for (const Parameter* p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step(double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * p.grad;
    v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * p.grad.cwiseAbs2();
    p.value.array() -= lr * (m_[k].array() / c1) / ((v_[k].array() / c2).sqrt() + cfg_.eps);
  }
}

double StepSchedule::at(int epoch) const {
  std::size_t k = 0;
  while (k < boundaries.size() && epoch >= boundaries[k]) ++k;
  return rates[k];
}

StepSchedule StepSchedule::stretched(double factor) const {
  StepSchedule s = *this;
  for (int& b : s.boundaries) b = static_cast<int>(std::lround(b * factor));
  return s;
}

void StepSchedule::validate() const {
  if (rates.size() != boundaries.size() + 1) throw ConfigError("lr schedule: need one more rate than boundaries");
  for (std::size_t k = 1; k < boundaries.size(); ++k)
    if (boundaries[k] <= boundaries[k - 1]) throw ConfigError("lr schedule: boundaries must increase");
  for (double r : rates)
    if (!(r > 0.0)) throw ConfigError("lr schedule: rates must be positive");
}

bool EarlyStopping::update(int epoch, double loss) {
  if (best_epoch_ < 0 || loss < best_) {
    best_ = loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

std::vector<Matrix> snapshot(const std::vector<Parameter*>& params) {
  std::vector<Matrix> out;
  out.reserve(params.size());
  for (const Parameter* p : params) out.push_back(p->value);
  return out;
}

void restore(const std::vector<Parameter*>& params, const std::vector<Matrix>& values) {
  if (params.size() != values.size()) throw ConfigError("restore: parameter count mismatch");
  for (std::size_t k = 0; k < params.size(); ++k) params[k]->value = values[k];
}

}  // namespace incde::nn
