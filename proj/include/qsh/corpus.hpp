#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsh/carleson.hpp"
#include "qsh/norms.hpp"
#include "qsh/spec_io.hpp"

namespace qsh {

enum class Verdict { Yes, No, Unknown };
std::string to_string(Verdict v);

/// Membership flags every entry carries, then the measure flags some entries add.
inline const std::vector<std::string> kMembershipFlags{"H1", "H2", "BMOSH", "VMOSH", "Bloch", "littleBloch",
                                                      "Dirichlet"};
inline const std::vector<std::string> kMeasureFlags{"mu_f_carleson", "mu_f_vanishing", "naive_mu_f_carleson"};

struct Expected {
  Verdict value = Verdict::Unknown;
  std::string note;  // where the answer comes from
};

/// Hadamard gap data; the entry's function is the truncation at l_max.
struct GapData {
  std::vector<long long> exponents;
  std::vector<Quaternion> coeffs;
  double alpha = 2.0;
  int l_max = 10;
};

struct CorpusEntry {
  std::string id;
  Json spec;  // function spec, round-trips through function_from_json
  SliceFunction f;
  std::map<std::string, Expected> flags;
  std::optional<GapData> gap;

  bool is_polynomial() const;
  /// Prefix truncations of a gap entry (empty otherwise).
  TruncationLadder truncations() const;
};

struct CorpusConfig {
  unsigned seed = 7;
  int gap_levels = 12;
};

std::vector<CorpusEntry> build_corpus(const CorpusConfig& cfg = {});
const CorpusEntry& corpus_entry(const std::vector<CorpusEntry>& corpus, const std::string& id);

struct ClassifyBudget {
  ArcFamily arcs{12, 16};
  NormConfig norm{};
  CarlesonConfig carleson{};
  int n_spiral = 4;  // sampled units: six axes plus a spiral
};

struct Computed {
  Verdict value = Verdict::Unknown;
  std::string method;
  double number = 0.0;  // the value behind the verdict, when there is one
};

struct Classification {
  std::string id;
  std::map<std::string, Computed> flags;
  std::vector<std::string> mismatches;  // flags whose computed verdict differs from the expected one
};

/// Computes every flag the entry lists with a yes/no expectation.
Classification classify(const CorpusEntry& e, const ClassifyBudget& budget = {});

Json to_json(const CorpusEntry& e);
Json to_json(const Classification& c);

}  // namespace qsh
