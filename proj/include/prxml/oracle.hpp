#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prxml/model.hpp"

namespace prxml {

// One outcome per declared event.
struct Valuation {
  std::map<std::string, std::string> outcomes;

  const std::string& at(const std::string& event) const { return outcomes.at(event); }
};

// A complete resolution of every random choice in a document: an outcome per
// event, keep/drop per ind edge (keyed by the edge's child node id), and a
// branch per mux node (nullopt = keep none).
struct Configuration {
  Valuation valuation;
  std::map<NodeId, bool> ind_keep;
  std::map<NodeId, std::optional<int>> mux_choice;
};

bool literal_true(const EventLiteral& lit, const Valuation& v);
bool formula_true(const BoolFormula& f, const Valuation& v);

// The sampling space of a document, enumerable in mixed-radix order. Mux
// nodes whose branch probabilities sum to exactly 1 get no keep-none branch.
class ConfigurationSpace {
 public:
  explicit ConfigurationSpace(const PDocument& doc);

  // Total number of configurations, saturating at 2^64-1.
  unsigned long long count() const { return count_; }

  Configuration first() const;
  // Advances to the next configuration; false once exhausted.
  bool next(Configuration& cfg) const;

  // Product of the chosen outcome/edge/branch probabilities.
  Rational probability(const Configuration& cfg) const;

 private:
  struct Slot {
    enum class What { Event, IndEdge, MuxNode } what;
    std::string event;  // Event slots
    NodeId node = -1;   // IndEdge: child id; MuxNode: mux id
    int arity = 0;
    bool has_none = false;  // MuxNode slots with residual probability
  };
  const PDocument& doc_;
  std::vector<Slot> slots_;
  unsigned long long count_ = 1;

  int digit_of(const Configuration& cfg, const Slot& s) const;
  void set_digit(Configuration& cfg, const Slot& s, int digit) const;
  Rational factor(const Slot& s, int digit) const;
};

// Evaluates the document under a total configuration. Throws
// IncompleteConfigurationError when the configuration misses an event, an
// ind edge, or a mux node.
XDocument apply_configuration(const PDocument& doc, const Configuration& cfg);

// The regular document nodes surviving the configuration.
std::set<NodeId> kept_regular_nodes(const PDocument& doc, const Configuration& cfg);

inline constexpr unsigned long long kDefaultConfigCap = 1ull << 24;

struct WorldEntry {
  Rational prob;
  XDocument repr;  // first configuration result seen for this world
};

// Worlds keyed by canonical form; probabilities sum to exactly 1.
struct WorldDistribution {
  std::map<std::string, WorldEntry> worlds;

  Rational total() const;
  const WorldEntry* find(const XDocument& w, bool ordered) const;
};

// Full enumeration of the sampling process. Throws
// TooManyConfigurationsError when the space exceeds cap.
WorldDistribution enumerate_worlds(const PDocument& doc,
                                   unsigned long long cap = kDefaultConfigCap);

// Probability that the document evaluates to exactly w (0 when w is not a
// possible world). Brute force over the configuration space.
Rational world_probability_bf(const PDocument& doc, const XDocument& w,
                              unsigned long long cap = kDefaultConfigCap);

bool check_configuration_yields(const PDocument& doc, const Configuration& cfg,
                                const XDocument& w);

// Equality of rooted labelled trees; unordered compares children as bags.
bool trees_equal(const XDocument& a, const XDocument& b, bool ordered);

// Injective encoding of a tree; equal strings iff trees_equal.
std::string canonical_form(const XDocument& doc, bool ordered);

// Fixes every cie/fie/mie edge according to the valuation (the node becomes
// a det node over its surviving children) and drops the event table. Ind and
// mux nodes are untouched, so the result is a {mux, ind, det} document.
PDocument resolve_under_valuation(const PDocument& doc, const Valuation& v);

// All valuations of the document's event table, with their probabilities.
std::vector<std::pair<Valuation, Rational>> all_valuations(const EventTable& events);

}  // namespace prxml
