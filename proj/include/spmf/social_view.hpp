#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spmf/factor_model.hpp"
#include "spmf/influence_matrix.hpp"

namespace spmf {

/// Influence weights as consumed by the social regulariser: for each user
/// the incoming links (sources shaping its estimate) and the outgoing links
/// (targets it helps shape). Both directions carry the same weights.
class SocialView {
 public:
  struct Link {
    UserIndex user;
    double weight;
  };

  SocialView() = default;
  /// Repeated (source, target) pairs are summed. With `normalize`, each
  /// target's incoming weights are divided by their sum unless that sum is 0.
  SocialView(std::size_t num_users, std::vector<InfluenceEntry> entries, bool normalize);

  /// All domains summed entry-wise.
  static SocialView merged(const InfluenceMatrix& matrix, bool normalize);
  static SocialView for_domain(const InfluenceMatrix& matrix, DomainIndex d, bool normalize);

  std::size_t num_users() const noexcept { return in_offsets_.empty() ? 0 : in_offsets_.size() - 1; }
  std::size_t num_links() const noexcept { return in_.size(); }
  std::span<const Link> incoming(UserIndex u) const;
  std::span<const Link> outgoing(UserIndex u) const;

  /// Weighted combination of the incoming neighbours' factor rows.
  Eigen::VectorXd estimate(UserIndex u, const FactorMatrix& user_factors) const;

 private:
  std::vector<std::size_t> in_offsets_;
  std::vector<Link> in_;
  std::vector<std::size_t> out_offsets_;
  std::vector<Link> out_;
};

/// Estimate of user `u`'s factor row from its influence entries in `domain`.
/// Zero vector when there are none.
Eigen::VectorXd social_estimate(UserIndex u, const InfluenceMatrix& matrix, const FactorMatrix& user_factors,
                                DomainIndex domain, bool normalize);

}  // namespace spmf
