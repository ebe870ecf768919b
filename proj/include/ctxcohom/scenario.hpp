#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ctxcohom {

/// A subset of the measurement set X, stored as a bitmask over measurement
/// indices. Scenarios are limited to 64 measurements.
class MeasurementSet {
 public:
  constexpr MeasurementSet() = default;
  constexpr explicit MeasurementSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr MeasurementSet singleton(std::size_t m) {
    return MeasurementSet(std::uint64_t{1} << m);
  }
  static constexpr MeasurementSet first_n(std::size_t n) {
    return MeasurementSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t m) const { return (bits_ >> m) & 1U; }
  constexpr bool subset_of(MeasurementSet other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr MeasurementSet operator&(MeasurementSet o) const { return MeasurementSet(bits_ & o.bits_); }
  constexpr MeasurementSet operator|(MeasurementSet o) const { return MeasurementSet(bits_ | o.bits_); }
  constexpr bool operator==(const MeasurementSet&) const = default;
  constexpr auto operator<=>(const MeasurementSet&) const = default;

  /// Member indices in ascending order.
  std::vector<std::size_t> indices() const;

 private:
  std::uint64_t bits_ = 0;
};

/// A measurement context: its members in the order they were listed, plus the
/// set they form.
struct Context {
  std::vector<std::size_t> members;
  MeasurementSet set;
};

/// A tuple of context indices (repetitions allowed) with nonempty intersection.
struct Simplex {
  std::vector<std::size_t> contexts;
  MeasurementSet open;

  std::size_t degree() const { return contexts.size() - 1; }
  bool operator==(const Simplex&) const = default;
};

/// Measurement scenario <X, M, O>. Immutable once built.
class Scenario {
 public:
  /// Validates and builds a scenario. Throws Error with NotACover,
  /// NotAnAntichain, DisconnectedCover, DuplicateLabel or UnknownLabel.
  static Scenario build(std::vector<std::string> measurements,
                        const std::vector<std::vector<std::string>>& contexts,
                        std::vector<std::string> outcomes);

  const std::vector<std::string>& measurements() const { return measurements_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }

  std::size_t num_measurements() const { return measurements_.size(); }
  std::size_t num_contexts() const { return contexts_.size(); }
  std::size_t num_outcomes() const { return outcomes_.size(); }
  MeasurementSet all() const { return MeasurementSet::first_n(measurements_.size()); }
  const Context& context(std::size_t i) const { return contexts_.at(i); }

  std::optional<std::size_t> measurement_index(const std::string& label) const;
  std::optional<std::size_t> outcome_index(const std::string& label) const;

  /// Looks a context up by its member labels (any order), a comma separated
  /// string such as "a1,b1" or "(a1,b1)".
  std::optional<std::size_t> find_context(const std::string& spec) const;

  /// "(a1,b1)" in listed member order.
  std::string context_name(std::size_t i) const;
  /// "{a1,b1}" in canonical (X) order; "{}" for the empty set.
  std::string open_name(MeasurementSet u) const;

  /// Whether U lies inside some context.
  bool beneath_cover(MeasurementSet u) const;
  /// The first context (in listing order) containing U.
  std::optional<std::size_t> containing_context(MeasurementSet u) const;

  /// Closure of the contexts under pairwise intersection, together with the
  /// empty set and X. Every open of every nerve simplex is in this family.
  /// Sorted by (size, bits).
  std::vector<MeasurementSet> relevant_opens() const;

 private:
  Scenario() = default;

  std::vector<std::string> measurements_;
  std::vector<Context> contexts_;
  std::vector<std::string> outcomes_;
};

/// All q-simplices, in lexicographic order of their index tuples.
std::vector<Simplex> nerve(const Scenario& scenario, std::size_t q);

/// Deletes the j-th entry of a simplex of degree >= 1.
Simplex face(const Scenario& scenario, const Simplex& sigma, std::size_t j);

/// Intersection of the contexts of a tuple.
MeasurementSet open_of(const Scenario& scenario, const std::vector<std::size_t>& contexts);

/// Nerve levels 0..max_degree precomputed with index lookup. Immutable; safe to
/// share between threads.
class Nerve {
 public:
  Nerve(const Scenario& scenario, std::size_t max_degree);

  std::size_t max_degree() const { return levels_.size() - 1; }
  const std::vector<Simplex>& level(std::size_t q) const;
  std::optional<std::size_t> index_of(const std::vector<std::size_t>& contexts) const;
  /// Position of the j-th face of simplex `index` at `q` in level q-1.
  std::size_t face_index(std::size_t q, std::size_t index, std::size_t j) const;

 private:
  std::size_t num_contexts_;
  std::vector<std::vector<Simplex>> levels_;
  // code (base num_contexts) -> position, -1 when the tuple is not a simplex
  std::vector<std::vector<std::int64_t>> lookup_;
};

}  // namespace ctxcohom
