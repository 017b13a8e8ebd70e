#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <vector>

#include "graphadapt/graph.hpp"
#include "graphadapt/objective.hpp"

namespace graphadapt {

/// Users x movies ratings, 0 meaning unrated. Stored densely.
class RatingsMatrix {
 public:
  RatingsMatrix() = default;
  RatingsMatrix(int users, int movies);

  int users() const noexcept { return users_; }
  int movies() const noexcept { return movies_; }
  double at(int user, int movie) const { return data_[index(user, movie)]; }
  void set(int user, int movie, double rating) { data_[index(user, movie)] = rating; }
  std::size_t nonzeros() const;

 private:
  std::size_t index(int user, int movie) const;

  int users_ = 0;
  int movies_ = 0;
  std::vector<double> data_;
};

/// MovieLens-100k `user item rating timestamp` (tab or space separated,
/// 1-based ids). Ratings must be integers in 1..5.
RatingsMatrix read_movielens(std::istream& in);
RatingsMatrix load_movielens(const std::filesystem::path& path);

/// R = (1/rank) U V^T with U, V ~ U[1, sqrt 5] (entries in [1, 5]), each
/// entry observed with probability `density`. Observed entries are real valued.
RatingsMatrix synthetic_low_rank_ratings(int users, int movies, int rank, double density,
                                         std::uint64_t seed);

/// Movie similarity graph over the movies rated by at least one training user.
struct MovieGraph {
  Graph graph;               ///< normalized GSO
  std::vector<int> movies;   ///< graph vertex -> movie column
  std::vector<int> excluded; ///< movies without training ratings
};

/// Pearson correlation between movie columns over the training users; each
/// movie keeps its `neighbors` strongest positive correlations, symmetrized by
/// union with the larger weight. The GSO is normalized.
MovieGraph movie_similarity_graph(const RatingsMatrix& ratings, const std::vector<int>& train_users,
                                  int neighbors);

/// One sample per listed user who rated `target_movie`: the user's ratings on
/// the graph's movies with the target zeroed as input, the rating at the
/// target vertex as target.
std::vector<Sample> rating_samples(const RatingsMatrix& ratings, const MovieGraph& graph,
                                   int target_movie, const std::vector<int>& users);

}  // namespace graphadapt
