#pragma once

#include <cmath>

namespace lexcase::embed::detail {

template <class OnOut>
double negative_sampling(std::span<const double> h, std::size_t target, std::span<const std::size_t> negatives,
                         const Matrix& word_out, std::span<double> grad_h, OnOut&& on_out) {
  double loss = 0.0;
  auto visit = [&](std::size_t row, double label) {
    const auto u = word_out.row(row);
    double f = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) f += u[i] * h[i];
    loss -= label > 0.5 ? log_sigmoid(f) : log_sigmoid(-f);
    const double coef = sigmoid(f) - label;
    for (std::size_t i = 0; i < h.size(); ++i) grad_h[i] += coef * u[i];
    on_out(row, coef);
  };
  visit(target, 1.0);
  for (std::size_t neg : negatives) visit(neg, 0.0);
  return loss;
}

}  // namespace lexcase::embed::detail
