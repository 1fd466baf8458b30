#include "bumpforest/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bumpforest {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("intensity alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

bool taken(const std::vector<double>& sorted, double x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

// One layer, redrawing any location already present in `occupied` or drawn
// earlier in this layer.
std::vector<double> draw_layer(double alpha, std::mt19937_64& engine,
                               const std::vector<double>& occupied) {
  const int count = sample_poisson(engine, alpha);
  std::vector<double> locs;
  locs.reserve(count);
  for (int i = 0; i < count; ++i) {
    double x = uniform_open_closed(engine);
    while (taken(occupied, x) || std::find(locs.begin(), locs.end(), x) != locs.end()) {
      x = uniform_open_closed(engine);
    }
    locs.push_back(x);
  }
  std::sort(locs.begin(), locs.end());
  return locs;
}

}  // namespace

std::mt19937_64 RngStream::engine(std::uint64_t lane) const {
  const std::uint64_t key = splitmix64(seed_ ^ splitmix64(stream_id_ ^ splitmix64(lane)));
  return std::mt19937_64(key);
}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(stream_id_ + 0x632be59bd9b4e019ULL) ^ index);
}

double uniform_open_closed(std::mt19937_64& engine) {
  // 53 random bits onto {1, ..., 2^53} / 2^53.
  return static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

int sample_poisson(std::mt19937_64& engine, double mean) {
  if (!(mean >= 0.0) || mean > 30.0) {
    throw std::invalid_argument("sample_poisson: mean outside [0, 30]");
  }
  const double limit = std::exp(-mean);
  int k = 0;
  double product = uniform_open_closed(engine);
  while (product > limit) {
    ++k;
    product *= uniform_open_closed(engine);
  }
  return k;
}

Configuration::Configuration(double alpha, int sampled_depth, std::vector<Atom> atoms)
    : alpha_(alpha), sampled_depth_(sampled_depth), atoms_(std::move(atoms)) {
  check_alpha(alpha);
  if (sampled_depth < 0) throw std::invalid_argument("sampled_depth must be non-negative");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!(a.location > 0.0 && a.location <= 1.0)) {
      throw std::invalid_argument("atom location must lie in (0, 1]");
    }
    if (a.layer < 0 || a.layer >= sampled_depth) {
      throw std::invalid_argument("atom layer outside the realized depth");
    }
    if (i > 0 && atoms_[i - 1].location == a.location) {
      throw std::invalid_argument("two atoms share a location");
    }
  }
}

std::size_t Configuration::count_in_layer(int layer) const {
  return static_cast<std::size_t>(std::count_if(
      atoms_.begin(), atoms_.end(), [layer](const Atom& a) { return a.layer == layer; }));
}

nlohmann::json Configuration::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : atoms_) atoms.push_back({a.location, a.layer});
  return {{"alpha", alpha_}, {"sampled_depth", sampled_depth_}, {"atoms", std::move(atoms)}};
}

Configuration Configuration::from_json(const nlohmann::json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<int>()});
  return Configuration(j.at("alpha").get<double>(), j.at("sampled_depth").get<int>(),
                       std::move(atoms));
}

std::vector<double> sample_layer(double alpha, std::mt19937_64& engine) {
  check_alpha(alpha);
  return draw_layer(alpha, engine, {});
}

Configuration empty_configuration(double alpha) { return Configuration(alpha, 0, {}); }

Configuration extend_depth(const Configuration& c, int new_depth, const RngStream& rng) {
  if (new_depth <= c.sampled_depth()) {
    throw std::invalid_argument("extend_depth: new depth must exceed the sampled depth");
  }
  std::vector<Atom> atoms = c.atoms();
  std::vector<double> occupied;
  occupied.reserve(atoms.size());
  for (const auto& a : atoms) occupied.push_back(a.location);
  for (int k = c.sampled_depth(); k < new_depth; ++k) {
    auto engine = rng.engine(static_cast<std::uint64_t>(k));
    for (double x : draw_layer(c.alpha(), engine, occupied)) {
      atoms.push_back({x, k});
      occupied.insert(std::upper_bound(occupied.begin(), occupied.end(), x), x);
    }
  }
  return Configuration(c.alpha(), new_depth, std::move(atoms));
}

Configuration sample_configuration(double alpha, int depth, const RngStream& rng) {
  const auto empty = empty_configuration(alpha);
  return depth == 0 ? empty : extend_depth(empty, depth, rng);
}

Configuration bump(const Configuration& c, const Atom& x) {
  if (x.layer != 0) throw std::invalid_argument("bump: only layer-0 atoms can be bumped");
  const auto& atoms = c.atoms();
  if (std::find(atoms.begin(), atoms.end(), x) == atoms.end()) {
    throw std::invalid_argument("bump: atom is not in the configuration");
  }
  // Left of x, layer k is read from layer k+1, realized only below
  // sampled_depth - 1. Atoms right of x at the last realized layer are
  // dropped so both sides share the same horizon.
  const int depth = c.sampled_depth() - 1;
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (a.location < x.location) {
      if (a.layer >= 1) out.push_back({a.location, a.layer - 1});
    } else if (a.location > x.location && a.layer < depth) {
      out.push_back(a);
    }
  }
  return Configuration(c.alpha(), depth, std::move(out));
}

}  // namespace bumpforest
