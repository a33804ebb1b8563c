#include "spmf/social_view.hpp"

#include <algorithm>
#include <cmath>

#include "spmf/errors.hpp"

namespace spmf {

SocialView::SocialView(std::size_t num_users, std::vector<InfluenceEntry> entries, bool normalize) {
  std::sort(entries.begin(), entries.end(), [](const InfluenceEntry& a, const InfluenceEntry& b) {
    return std::tie(a.target, a.source) < std::tie(b.target, b.source);
  });
  std::vector<InfluenceEntry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.source >= num_users || e.target >= num_users) throw DataError("influence entry user out of range");
    if (!merged.empty() && merged.back().source == e.source && merged.back().target == e.target) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }

  in_offsets_.assign(num_users + 1, 0);
  out_offsets_.assign(num_users + 1, 0);
  for (const auto& e : merged) {
    ++in_offsets_[e.target + 1];
    ++out_offsets_[e.source + 1];
  }
  for (std::size_t u = 0; u < num_users; ++u) {
    in_offsets_[u + 1] += in_offsets_[u];
    out_offsets_[u + 1] += out_offsets_[u];
  }

  in_.resize(merged.size());
  for (std::size_t k = 0; k < merged.size(); ++k) in_[k] = {merged[k].source, merged[k].weight};
  if (normalize) {
    for (std::size_t u = 0; u < num_users; ++u) {
      double sum = 0.0;
      for (auto k = in_offsets_[u]; k < in_offsets_[u + 1]; ++k) sum += in_[k].weight;
      if (sum == 0.0) continue;
      for (auto k = in_offsets_[u]; k < in_offsets_[u + 1]; ++k) in_[k].weight /= sum;
    }
  }

  // Transpose; merged is target-major, so each source row fills in
  // ascending target order.
  out_.resize(merged.size());
  std::vector<std::size_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::size_t k = 0; k < merged.size(); ++k) {
    out_[cursor[merged[k].source]++] = {merged[k].target, in_[k].weight};
  }
}

SocialView SocialView::merged(const InfluenceMatrix& matrix, bool normalize) {
  std::vector<InfluenceEntry> all;
  all.reserve(matrix.total_entries());
  for (DomainIndex d = 0; d < matrix.num_domains(); ++d) {
    auto list = matrix.entries(d);
    all.insert(all.end(), list.begin(), list.end());
  }
  return SocialView(matrix.num_users(), std::move(all), normalize);
}

SocialView SocialView::for_domain(const InfluenceMatrix& matrix, DomainIndex d, bool normalize) {
  auto list = matrix.entries(d);
  return SocialView(matrix.num_users(), {list.begin(), list.end()}, normalize);
}

std::span<const SocialView::Link> SocialView::incoming(UserIndex u) const {
  if (u >= num_users()) return {};
  return std::span(in_).subspan(in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]);
}

std::span<const SocialView::Link> SocialView::outgoing(UserIndex u) const {
  if (u >= num_users()) return {};
  return std::span(out_).subspan(out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]);
}

Eigen::VectorXd SocialView::estimate(UserIndex u, const FactorMatrix& user_factors) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(user_factors.cols());
  for (const auto& link : incoming(u)) out += link.weight * user_factors.row(link.user).transpose();
  return out;
}

Eigen::VectorXd social_estimate(UserIndex u, const InfluenceMatrix& matrix, const FactorMatrix& user_factors,
                                DomainIndex domain, bool normalize) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(user_factors.cols());
  auto entries = matrix.incoming(domain, u);
  double sum = 0.0;
  for (const auto& e : entries) sum += e.weight;
  const bool divide = normalize && sum != 0.0;
  for (const auto& e : entries) {
    const double w = divide ? e.weight / sum : e.weight;
    out += w * user_factors.row(e.source).transpose();
  }
  return out;
}

}  // namespace spmf
