#include "graphadapt/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "graphadapt/error.hpp"
#include "graphadapt/rng.hpp"

namespace graphadapt {

RatingsMatrix::RatingsMatrix(int users, int movies) : users_(users), movies_(movies) {
  if (users < 0 || movies < 0) throw InvalidArgument("RatingsMatrix: negative size");
  data_.assign(static_cast<std::size_t>(users) * movies, 0.0);
}

std::size_t RatingsMatrix::index(int user, int movie) const {
  if (user < 0 || user >= users_ || movie < 0 || movie >= movies_) {
    throw InvalidArgument("RatingsMatrix: index out of range");
  }
  return static_cast<std::size_t>(user) * movies_ + movie;
}

std::size_t RatingsMatrix::nonzeros() const {
  return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](double v) { return v != 0.0; }));
}

RatingsMatrix read_movielens(std::istream& in) {
  struct Entry {
    int user, movie, rating;
  };
  std::vector<Entry> entries;
  int max_user = 0;
  int max_movie = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    long long user = 0, movie = 0, rating = 0, stamp = 0;
    if (!(ss >> user >> movie >> rating >> stamp)) {
      throw ParseError("ratings line " + std::to_string(line_no) + ": expected 'user item rating timestamp'");
    }
    if (user < 1 || movie < 1 || rating < 1 || rating > 5) {
      throw ParseError("ratings line " + std::to_string(line_no) + ": value out of range");
    }
    entries.push_back({static_cast<int>(user - 1), static_cast<int>(movie - 1), static_cast<int>(rating)});
    max_user = std::max(max_user, static_cast<int>(user));
    max_movie = std::max(max_movie, static_cast<int>(movie));
  }
  RatingsMatrix r(max_user, max_movie);
  for (const auto& e : entries) {
    if (r.at(e.user, e.movie) != 0.0) {
      throw ParseError("ratings: user " + std::to_string(e.user + 1) + " rated movie " +
                       std::to_string(e.movie + 1) + " twice");
    }
    r.set(e.user, e.movie, e.rating);
  }
  return r;
}

RatingsMatrix load_movielens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_movielens(in);
}

RatingsMatrix synthetic_low_rank_ratings(int users, int movies, int rank, double density,
                                         std::uint64_t seed) {
  if (rank < 1 || !(density > 0.0 && density <= 1.0)) {
    throw InvalidArgument("synthetic ratings: rank >= 1 and density in (0, 1] required");
  }
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> factor(1.0, std::sqrt(5.0));
  std::vector<double> U(static_cast<std::size_t>(users) * rank), V(static_cast<std::size_t>(movies) * rank);
  for (auto& u : U) u = factor(rng);
  for (auto& v : V) v = factor(rng);
  std::bernoulli_distribution observed(density);
  RatingsMatrix R(users, movies);
  for (int u = 0; u < users; ++u) {
    for (int m = 0; m < movies; ++m) {
      double s = 0.0;
      for (int k = 0; k < rank; ++k) s += U[static_cast<std::size_t>(u) * rank + k] * V[static_cast<std::size_t>(m) * rank + k];
      if (observed(rng)) R.set(u, m, s / rank);
    }
  }
  return R;
}

MovieGraph movie_similarity_graph(const RatingsMatrix& ratings, const std::vector<int>& train_users,
                                  int neighbors) {
  if (neighbors < 1) throw InvalidArgument("movie graph: neighbors must be >= 1");
  MovieGraph mg;
  for (int m = 0; m < ratings.movies(); ++m) {
    bool rated = false;
    for (int u : train_users) {
      if (ratings.at(u, m) != 0.0) {
        rated = true;
        break;
      }
    }
    (rated ? mg.movies : mg.excluded).push_back(m);
  }
  if (!mg.excluded.empty()) {
    std::cerr << "warning: " << mg.excluded.size()
              << " movie(s) without training ratings left out of the movie graph\n";
  }
  const auto n = mg.movies.size();
  const auto T = train_users.size();
  if (n < 2 || T < 2) throw InvalidArgument("movie graph: need >= 2 rated movies and >= 2 training users");

  // Centered columns, then Pearson correlations.
  std::vector<std::vector<double>> col(n, std::vector<double>(T));
  std::vector<double> norm(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    double mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      col[a][t] = ratings.at(train_users[t], mg.movies[a]);
      mean += col[a][t];
    }
    mean /= static_cast<double>(T);
    for (auto& v : col[a]) {
      v -= mean;
      norm[a] += v * v;
    }
    norm[a] = std::sqrt(norm[a]);
  }
  std::vector<std::vector<double>> corr(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (norm[a] == 0.0 || norm[b] == 0.0) continue;
      double d = 0.0;
      for (std::size_t t = 0; t < T; ++t) d += col[a][t] * col[b][t];
      corr[a][b] = corr[b][a] = d / (norm[a] * norm[b]);
    }
  }

  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  std::vector<std::size_t> order(n);
  for (std::size_t a = 0; a < n; ++a) {
    order.clear();
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a && corr[a][b] > 0.0) order.push_back(b);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return corr[a][x] > corr[a][y]; });
    if (order.size() > static_cast<std::size_t>(neighbors)) order.resize(static_cast<std::size_t>(neighbors));
    for (std::size_t b : order) w[a][b] = w[b][a] = corr[a][b];
  }
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (w[a][b] > 0.0) edges.push_back({static_cast<int>(a), static_cast<int>(b), w[a][b]});
    }
  }
  if (edges.empty()) throw InvalidArgument("movie graph: no positive correlations");
  mg.graph = normalize_gso(Graph::from_edges(static_cast<int>(n), std::move(edges)));
  return mg;
}

std::vector<Sample> rating_samples(const RatingsMatrix& ratings, const MovieGraph& graph,
                                   int target_movie, const std::vector<int>& users) {
  const auto it = std::find(graph.movies.begin(), graph.movies.end(), target_movie);
  if (it == graph.movies.end()) throw InvalidArgument("rating_samples: target movie is not in the graph");
  const auto target_vertex = static_cast<std::size_t>(it - graph.movies.begin());
  const auto n = graph.movies.size();
  std::vector<Sample> out;
  for (int u : users) {
    const double r = ratings.at(u, target_movie);
    if (r == 0.0) continue;
    Sample s;
    Signal x(n), y(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) x[v] = ratings.at(u, graph.movies[v]);
    x[target_vertex] = 0.0;
    y[target_vertex] = r;
    s.input = {std::move(x)};
    s.target = {std::move(y)};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace graphadapt
