#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persevo/syntax.hpp"

namespace persevo {

/** A relation cell: an identifier, a timestamp, or the missing value ⊥. */
struct Cell {
  enum class Kind { Bottom, Value, Time };
  Kind kind = Kind::Bottom;
  std::string value;
  std::uint64_t time = 0;

  static Cell bottom() { return {}; }
  static Cell id(std::string v) { return {Kind::Value, std::move(v), 0}; }
  static Cell at(std::uint64_t t) { return {Kind::Time, "", t}; }

  bool is_bottom() const { return kind == Kind::Bottom; }
  std::string str() const;

  bool operator==(const Cell& o) const = default;
  /** Total order with ⊥ below every timestamp and every identifier. */
  std::strong_ordering operator<=>(const Cell& o) const;
};

using Row = std::vector<Cell>;

struct ForeignKey {
  std::string column;
  std::string ref_relation;
  std::string ref_column;

  auto operator<=>(const ForeignKey&) const = default;
  bool operator==(const ForeignKey&) const = default;
};

inline constexpr const char* kTimeColumn = "time";
inline constexpr const char* kIdColumn = "id";

struct Relation {
  std::string name;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::optional<std::string> pk;
  std::vector<ForeignKey> fks;

  int col(const std::string& c) const;
  int require_col(const std::string& c) const;
  bool has_col(const std::string& c) const { return col(c) >= 0; }
  bool has_time() const { return has_col(kTimeColumn); }
  const Row* find_key(const std::string& id) const;

  bool operator==(const Relation&) const = default;
};

/** Named relations; iteration follows insertion order and replacement keeps position. */
class RelationSet {
 public:
  bool contains(const std::string& name) const { return index(name) >= 0; }
  const Relation* find(const std::string& name) const;
  const Relation& get(const std::string& name) const;
  /** Replaces the relation with the same name in place, or appends it. */
  void put(Relation r);
  void erase(const std::string& name);
  std::size_t size() const { return rels_.size(); }
  bool empty() const { return rels_.empty(); }
  auto begin() const { return rels_.begin(); }
  auto end() const { return rels_.end(); }

  bool operator==(const RelationSet&) const = default;

 private:
  int index(const std::string& name) const;
  std::vector<Relation> rels_;
};

// Relational algebra. Rows compare with set semantics; results keep input row order.

Relation project(const Relation& r, const std::vector<std::string>& cols);
Relation select_where(const Relation& r, const std::function<bool(const Relation&, const Row&)>& pred);
Relation rename_attrs(const Relation& r, const std::vector<std::string>& olds, const std::vector<std::string>& news);
Relation add_column(const Relation& r, const std::string& col, const std::function<Cell(const Relation&, const Row&)>& init);
Relation drop_columns(const Relation& r, const std::vector<std::string>& cols);
std::vector<std::string> shared_columns(const Relation& a, const Relation& b);
Relation natural_join(const Relation& a, const Relation& b);
Relation natural_outer_join(const Relation& a, const Relation& b);
/** Sorted, duplicate-free copy of the rows. */
std::vector<Row> row_set(const Relation& r);
/** Set-semantics equality of two relations with the same column names (order-insensitive). */
bool same_rows(const Relation& a, const Relation& b);

// Schema modification operations. Each returns a new set; untouched relations are kept as-is.

using ColumnInit = std::function<Cell(const Relation&, const Row&)>;

RelationSet smo_create_table(const RelationSet& rs, const std::string& name, const std::vector<std::string>& cols);
RelationSet smo_rename_table(const RelationSet& rs, const std::string& c, const std::string& d);
RelationSet smo_rename_column(const RelationSet& rs, const std::string& c, const std::vector<std::string>& olds,
                              const std::vector<std::string>& news);
RelationSet smo_add_column(const RelationSet& rs, const std::string& c, const std::vector<std::string>& cols,
                           const std::vector<ColumnInit>& inits);

/** Values removed by DROP COLUMN, keyed by the row key (id column, else time column). */
struct DroppedValues {
  std::vector<std::string> columns;
  std::vector<std::pair<Cell, std::vector<Cell>>> rows;
};

std::pair<RelationSet, DroppedValues> smo_drop_column(const RelationSet& rs, const std::string& c,
                                                      const std::vector<std::string>& cols);
RelationSet smo_decompose(const RelationSet& rs, const std::string& c, const std::string& c1,
                          const std::vector<std::string>& cols1, const std::string& c2,
                          const std::vector<std::string>& cols2, const std::vector<std::string>& fk_cols);
RelationSet smo_join(const RelationSet& rs, const std::string& c1, const std::string& c2, const std::string& out,
                     bool outer);

/**
 * Class-level decomposition link: writes to objects of `from` are mirrored
 * into their `to` part along the column pairs (source column, target column).
 */
struct Link {
  std::string from;
  std::string to;
  std::vector<std::pair<std::string, std::string>> pairs;

  auto operator<=>(const Link&) const = default;
  bool operator==(const Link&) const = default;
};

/** The store μ: relations plus bindings from annotated identifiers to relation names. */
struct Store {
  RelationSet relations;
  std::map<AnnId, std::string> bindings;
  std::vector<Link> links;

  bool operator==(const Store&) const = default;
};

std::string dump_store(const Store& s);
Store parse_store(const std::string& text);
/** Canonical form: relations and columns sorted by name, rows as sets, links sorted. */
Store canonical(const Store& s);
bool same_store(const Store& a, const Store& b);
/** Stable 64-bit FNV-1a hash of the canonical dump. */
std::uint64_t store_hash(const Store& s);

}  // namespace persevo
