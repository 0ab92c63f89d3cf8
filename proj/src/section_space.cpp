#include "btq/section_space.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace btq {

SectionSpace::SectionSpace(int N, int k0) : N_(N), k0_(k0), M_(N + k0) {
  if (M_ < 0) return;  // negative bundle: the space is empty
  gram_diag_.resize(M_ + 1);
  ortho_scale_.resize(M_ + 1);
  // gram_diag[j] = 1 / binomial(M, j) by the Beta integral, scaled so that
  // gram_diag[0] = 1. The upper half mirrors the lower so the j <-> M-j
  // symmetry holds bit-exactly.
  double g = 1.0;
  for (int j = 0; 2 * j <= M_; ++j) {
    gram_diag_[j] = gram_diag_[M_ - j] = g;
    g *= double(j + 1) / double(M_ - j);
  }
  for (int j = 0; j <= M_; ++j) ortho_scale_[j] = 1.0 / std::sqrt(gram_diag_[j]);
}

SectionSpace make_space(int N, int k0) { return SectionSpace(N, k0); }

double gram_entry(const SectionSpace& space, int j) {
  if (space.empty() || j < 0 || j > space.total_degree())
    throw config_error("gram_entry: index " + std::to_string(j) + " out of range for M = " +
                       std::to_string(space.total_degree()));
  return space.gram_diag()[j];
}

std::string SectionSpace::to_json() const {
  char buf[40];
  std::string s = "{\"N\":" + std::to_string(N_) + ",\"k0\":" + std::to_string(k0_) +
                  ",\"M\":" + std::to_string(M_) + ",\"gram_diag\":[";
  for (size_t j = 0; j < gram_diag_.size(); ++j) {
    if (j) s += ",";
    std::snprintf(buf, sizeof buf, "%.17g", gram_diag_[j]);
    s += buf;
  }
  return s + "]}";
}

SectionSpace SectionSpace::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SectionSpace space(j.at("N").get<int>(), j.at("k0").get<int>());
  if (j.at("M").get<int>() != space.total_degree())
    throw config_error("SectionSpace JSON: inconsistent M");
  return space;
}

}  // namespace btq
