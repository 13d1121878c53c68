/* Copyright 2026 The docdet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "docdet/numerics/optim.h"

#include <cmath>

#include "docdet/error.h"

namespace docdet::numerics {

void TrainHyperparams::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) {
    throw ConfigError("decay_factor must lie in (0, 1]");
  }
  if (decay_every_epochs < 1) throw ConfigError("decay_every_epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("momentum must lie in [0, 1)");
  }
}

double lr_schedule(const TrainHyperparams& hp, int epoch) {
  if (epoch < 0) throw ConfigError("lr_schedule: negative epoch");
  return hp.learning_rate *
         std::pow(hp.decay_factor, epoch / hp.decay_every_epochs);
}

void sgd_step(std::span<Parameter* const> params, double lr) {
  for (Parameter* p : params) {
    if (p->grad.shape() != p->value.shape()) {
      throw ShapeError("sgd_step: grad shape mismatch for " + p->name);
    }
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      p->value[i] -= lr * p->grad[i];
    }
    p->zero_grad();
  }
}

void SgdOptimizer::step(std::span<Parameter* const> params, double lr) {
  if (momentum_ == 0.0) {
    sgd_step(params, lr);
    return;
  }
  if (velocity_.size() != params.size()) {
    velocity_.clear();
    for (Parameter* p : params) velocity_.emplace_back(p->value.shape());
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    Tensor& v = velocity_[k];
    if (v.shape() != p.value.shape()) v = Tensor(p.value.shape());
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      v[i] = momentum_ * v[i] + p.grad[i];
      p.value[i] -= lr * v[i];
    }
    p.zero_grad();
  }
}

}  // namespace docdet::numerics
