#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

namespace bumpforest {

/// Reproducible random stream identified by (seed, stream_id).
///
/// Every draw is taken from an engine derived from (seed, stream_id, lane).
/// Lanes let a consumer split one stream into independent, addressable
/// sub-streams: a configuration samples layer k from lane k, so the same
/// layer is always realized the same way no matter when it is requested.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::mt19937_64 engine(std::uint64_t lane = 0) const;

  /// Child stream, e.g. one per trial.
  RngStream child(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

/// Uniform on (0, 1].
double uniform_open_closed(std::mt19937_64& engine);

/// Uniform integer in [0, bound), rejection sampled.
std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound);

/// Poisson(mean) by Knuth's product method. Intended for small means.
int sample_poisson(std::mt19937_64& engine, double mean);

struct Atom {
  double location;  // in (0, 1]
  int layer;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A finite realization of the layered point process xi = (xi_0, xi_1, ...).
///
/// Layers 0..sampled_depth-1 are realized; deeper layers are not yet drawn.
/// Atoms are kept sorted by location and never share a location.
class Configuration {
 public:
  Configuration() = default;
  Configuration(double alpha, int sampled_depth, std::vector<Atom> atoms);

  double alpha() const { return alpha_; }
  int sampled_depth() const { return sampled_depth_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  std::size_t count_in_layer(int layer) const;

  nlohmann::json to_json() const;
  static Configuration from_json(const nlohmann::json& j);

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  double alpha_ = 1.0;
  int sampled_depth_ = 0;
  std::vector<Atom> atoms_;
};

/// Sorted locations of one Poisson(alpha) layer on [0, 1].
/// Throws std::invalid_argument unless 0 < alpha <= 1.
std::vector<double> sample_layer(double alpha, std::mt19937_64& engine);

/// Empty configuration with nothing realized yet.
Configuration empty_configuration(double alpha);

/// Realize layers c.sampled_depth()..new_depth-1; layer k uses rng lane k.
/// Locations colliding with an existing atom are redrawn.
Configuration extend_depth(const Configuration& c, int new_depth, const RngStream& rng);

/// Configuration with layers 0..depth-1 realized at intensity alpha.
Configuration sample_configuration(double alpha, int depth, const RngStream& rng);

/// The bump map: remove layer-0 atom x, lower every atom left of x by one
/// layer (dropping those that fall below 0), keep atoms right of x.
/// Throws std::invalid_argument if x is not a layer-0 atom of c.
Configuration bump(const Configuration& c, const Atom& x);

}  // namespace bumpforest
