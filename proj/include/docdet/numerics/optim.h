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

#ifndef DOCDET_NUMERICS_OPTIM_H_
#define DOCDET_NUMERICS_OPTIM_H_

#include <span>
#include <vector>

#include "docdet/numerics/tensor.h"

namespace docdet::numerics {

struct TrainHyperparams {
  double learning_rate = 0.001;
  double decay_factor = 0.1;
  int decay_every_epochs = 5;
  int batch_size = 4;
  // Heavy-ball momentum; 0 gives plain SGD.
  double momentum = 0.0;

  void validate() const;  // throws ConfigError
};

// initial * decay_factor ^ floor(epoch / decay_every_epochs).
double lr_schedule(const TrainHyperparams& hp, int epoch);

// value -= lr * grad for every parameter, then grads are zeroed.
void sgd_step(std::span<Parameter* const> params, double lr);

// SGD with optional momentum (v = mu * v + g; w -= lr * v). With momentum 0
// each step is exactly sgd_step.
class SgdOptimizer {
 public:
  explicit SgdOptimizer(double momentum = 0.0) : momentum_(momentum) {}
  void step(std::span<Parameter* const> params, double lr);

 private:
  double momentum_;
  std::vector<Tensor> velocity_;
};

}  // namespace docdet::numerics

#endif  // DOCDET_NUMERICS_OPTIM_H_
