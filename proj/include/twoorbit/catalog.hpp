#pragma once

#include "twoorbit/chevalley.hpp"
#include "twoorbit/classify.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twoorbit {

/// Integer values of the template variables: `n` (the rank), `npos` (the
/// number of positive roots) and loop variables.
using Bindings = std::map<std::string, long long>;

/// Integer arithmetic over + - * / and parentheses; names are looked up in
/// `vars`. Division must be exact. Throws std::invalid_argument.
long long evaluate_index_expression(std::string_view expr, const Bindings& vars);

/// Evaluates a root template to an ambient vector. Two forms are accepted:
///   * a signed sum of terms `[coef](a|e)index`, where `a` is a simple root,
///     `e` an ambient unit vector, and coef/index are integers or `{expr}`;
///     example: "e1+{s}e{j}" or "a{n-1}+2a{n}";
///   * a digit string of length rank with optional leading '-', read as
///     simple-root coordinates; example: "1232" or "-0100".
QVector evaluate_root_expression(const RootSystem& phi, std::string_view expr, const Bindings& vars);

/// Expands a stabilizer template (see data/catalog.json) into a spec.
/// Keys: "toral" ("full" or {"kernel": [expr...]}), "roots" (list of
/// expressions or {"for", "root", "pm"} loops), "positive_except",
/// "closure" ("additive" or "none") and "mixed" (list of {"for", "terms"}).
SubalgebraSpec expand_template(const RootSystem& phi, const nlohmann::json& tmpl, long long n);

/// Normalizes a type template such as "C1xC{n-1}" at a given n into the
/// canonical form produced by identify_type ("A1xB2" at n = 3). Rank-0
/// components vanish; an empty product is "0".
std::string expected_type_name(std::string_view tmpl, long long n);

struct CatalogVariant {
  /// Applies to every group of this family with rank in [min_rank, max_rank]
  /// (max_rank 0 means unbounded), or to the listed labels.
  std::optional<char> family;
  int min_rank = 1;
  int max_rank = 0;
  std::vector<std::string> labels;
  nlohmann::json stabilizer;

  bool applies_to(const RootSystem& phi) const;
};

struct CatalogEntry {
  std::string id;
  int table = 1;
  PairKind kind = PairKind::TypeI;
  /// Row of the classification table in plain notation.
  std::string row;
  /// Matching two-orbit variety description (display only).
  std::string embedding_note;
  /// Row given only partially by a condition; the stored expansion was
  /// derived by the engine rather than read off the row.
  bool derived_expansion = false;
  std::string literal_condition;
  std::string expected_type;       // template, e.g. "B{n-1}"
  std::string expected_center;     // index expression
  std::string expected_dimension;  // index expression
  std::vector<CatalogVariant> variants;

  const CatalogVariant* variant_for(const RootSystem& phi) const;
};

struct Catalog {
  std::vector<CatalogEntry> entries;

  std::vector<const CatalogEntry*> entries_for(const RootSystem& phi, std::optional<PairKind> kind = {}) const;
  std::vector<const CatalogEntry*> table(int t) const;
};

Catalog parse_catalog(const nlohmann::json& j);
/// Throws std::runtime_error when the file cannot be read or parsed.
Catalog load_catalog(const std::string& path);
/// The catalog shipped with the sources.
std::string default_catalog_path();

struct Instantiation {
  const CatalogEntry* entry = nullptr;
  /// Stabilizer with solved coefficients and attached checks.
  ClassifiedPair pair;
  /// Spec as written, before coefficient solving.
  SubalgebraSpec raw;
  std::vector<MixedSolution> solutions;
  std::string expected_type;
  int expected_center = 0;
  int expected_dimension = 0;
  /// Solved coefficients other than 1, one line per coefficient.
  std::vector<std::string> coefficient_log;
};

/// Throws std::out_of_range when no variant of the entry applies to the
/// group of `g`, and std::invalid_argument for a malformed template. When the
/// mixed lines admit no closed solution, `solutions` is empty, unknown
/// coefficients are set to 1 and the attached checks report the failure.
Instantiation instantiate(const ChevalleyAlgebra& g, const CatalogEntry& entry);
std::vector<Instantiation> instantiate_all(const ChevalleyAlgebra& g, const Catalog& c,
                                           std::optional<PairKind> kind = {});

struct DiffMatch {
  std::string entry_id;
  int computed_index = -1;
  /// Automorphism word carrying the computed stabilizer onto the catalog one.
  std::vector<std::string> conjugator;
};

struct DiffReport {
  std::vector<std::string> missing;  // catalog ids
  std::vector<int> extra;            // indices into the computed list
  std::vector<DiffMatch> matched;

  bool empty() const { return missing.empty() && extra.empty(); }
};

/// Matches computed pairs against instantiated entries up to automorphisms
/// of the root system and rescaling of mixed lines. Pairs of different kind
/// never match.
DiffReport diff(const RootSystem& phi, const std::vector<ClassifiedPair>& computed,
                const std::vector<Instantiation>& expected);

/// Sets catalog_match on every matched computed pair.
void annotate_matches(std::vector<ClassifiedPair>& computed, const DiffReport& report);

}  // namespace twoorbit
