#include <algorithm>
#include <set>

#include "persevo/relstore.hpp"

namespace persevo {

std::string Cell::str() const {
  switch (kind) {
    case Kind::Bottom: return "_";
    case Kind::Value: return value;
    case Kind::Time: return std::to_string(time);
  }
  return "_";
}

std::strong_ordering Cell::operator<=>(const Cell& o) const {
  if (kind != o.kind) return static_cast<int>(kind) <=> static_cast<int>(o.kind);
  if (kind == Kind::Time) return time <=> o.time;
  if (kind == Kind::Value) return value.compare(o.value) <=> 0;
  return std::strong_ordering::equal;
}

int Relation::col(const std::string& c) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == c) return static_cast<int>(i);
  return -1;
}

int Relation::require_col(const std::string& c) const {
  int i = col(c);
  if (i < 0) throw Error(ErrorKind::Premise, "RELATION", "unknown column " + c, name);
  return i;
}

const Row* Relation::find_key(const std::string& id) const {
  int k = col(kIdColumn);
  if (k < 0) return nullptr;
  for (const auto& r : rows)
    if (r[k].kind == Cell::Kind::Value && r[k].value == id) return &r;
  return nullptr;
}

int RelationSet::index(const std::string& name) const {
  for (std::size_t i = 0; i < rels_.size(); ++i)
    if (rels_[i].name == name) return static_cast<int>(i);
  return -1;
}

const Relation* RelationSet::find(const std::string& name) const {
  int i = index(name);
  return i < 0 ? nullptr : &rels_[i];
}

const Relation& RelationSet::get(const std::string& name) const {
  int i = index(name);
  if (i < 0) throw Error(ErrorKind::Premise, "RELATION", "no relation named " + name, name);
  return rels_[i];
}

void RelationSet::put(Relation r) {
  int i = index(r.name);
  if (i < 0)
    rels_.push_back(std::move(r));
  else
    rels_[i] = std::move(r);
}

void RelationSet::erase(const std::string& name) {
  int i = index(name);
  if (i >= 0) rels_.erase(rels_.begin() + i);
}

namespace {

void check_distinct(const std::vector<std::string>& cols, const std::string& where) {
  std::set<std::string> seen;
  for (const auto& c : cols)
    if (!seen.insert(c).second) throw Error(ErrorKind::Premise, "RELATION", "duplicate column " + c, where);
}

void dedupe(std::vector<Row>& rows) {
  std::set<Row> seen;
  std::vector<Row> out;
  for (auto& r : rows)
    if (seen.insert(r).second) out.push_back(std::move(r));
  rows = std::move(out);
}

}  // namespace

Relation project(const Relation& r, const std::vector<std::string>& cols) {
  check_distinct(cols, r.name);
  std::vector<int> idx;
  for (const auto& c : cols) idx.push_back(r.require_col(c));
  Relation out;
  out.name = r.name;
  out.columns = cols;
  for (const auto& row : r.rows) {
    Row nr;
    for (int i : idx) nr.push_back(row[i]);
    out.rows.push_back(std::move(nr));
  }
  dedupe(out.rows);
  if (r.pk && std::find(cols.begin(), cols.end(), *r.pk) != cols.end()) out.pk = r.pk;
  for (const auto& fk : r.fks)
    if (std::find(cols.begin(), cols.end(), fk.column) != cols.end()) out.fks.push_back(fk);
  return out;
}

Relation select_where(const Relation& r, const std::function<bool(const Relation&, const Row&)>& pred) {
  Relation out = r;
  out.rows.clear();
  for (const auto& row : r.rows)
    if (pred(r, row)) out.rows.push_back(row);
  return out;
}

Relation rename_attrs(const Relation& r, const std::vector<std::string>& olds, const std::vector<std::string>& news) {
  if (olds.size() != news.size())
    throw Error(ErrorKind::Premise, "RELATION", "rename lists differ in length", r.name);
  check_distinct(olds, r.name);
  Relation out = r;
  for (std::size_t i = 0; i < olds.size(); ++i) out.columns[r.require_col(olds[i])] = news[i];
  check_distinct(out.columns, r.name);
  auto map_col = [&](const std::string& c) {
    for (std::size_t i = 0; i < olds.size(); ++i)
      if (olds[i] == c) return news[i];
    return c;
  };
  if (out.pk) out.pk = map_col(*out.pk);
  for (auto& fk : out.fks) fk.column = map_col(fk.column);
  return out;
}

Relation add_column(const Relation& r, const std::string& col, const ColumnInit& init) {
  if (r.has_col(col)) throw Error(ErrorKind::Premise, "RELATION", "column " + col + " already exists", r.name);
  Relation out = r;
  out.columns.push_back(col);
  for (std::size_t i = 0; i < r.rows.size(); ++i) out.rows[i].push_back(init(r, r.rows[i]));
  return out;
}

Relation drop_columns(const Relation& r, const std::vector<std::string>& cols) {
  check_distinct(cols, r.name);
  for (const auto& c : cols) r.require_col(c);
  std::vector<std::string> keep;
  for (const auto& c : r.columns)
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) keep.push_back(c);
  std::vector<int> idx;
  for (const auto& c : keep) idx.push_back(r.col(c));
  Relation out = r;
  out.columns = keep;
  out.rows.clear();
  for (const auto& row : r.rows) {
    Row nr;
    for (int i : idx) nr.push_back(row[i]);
    out.rows.push_back(std::move(nr));
  }
  if (out.pk && !out.has_col(*out.pk)) out.pk.reset();
  std::erase_if(out.fks, [&](const ForeignKey& fk) { return !out.has_col(fk.column); });
  return out;
}

std::vector<std::string> shared_columns(const Relation& a, const Relation& b) {
  std::vector<std::string> out;
  for (const auto& c : a.columns)
    if (b.has_col(c)) out.push_back(c);
  return out;
}

namespace {

Relation join_impl(const Relation& a, const Relation& b, bool outer) {
  auto shared = shared_columns(a, b);
  if (shared.empty())
    throw Error(ErrorKind::Premise, "JOIN", "relations " + a.name + " and " + b.name + " share no columns", a.name);
  std::vector<std::pair<int, int>> keys;
  for (const auto& c : shared) keys.emplace_back(a.col(c), b.col(c));
  std::vector<int> b_only;
  Relation out;
  out.name = a.name;
  out.columns = a.columns;
  for (std::size_t j = 0; j < b.columns.size(); ++j)
    if (!a.has_col(b.columns[j])) {
      b_only.push_back(static_cast<int>(j));
      out.columns.push_back(b.columns[j]);
    }
  out.pk = a.pk;
  out.fks = a.fks;
  std::vector<bool> b_matched(b.rows.size(), false);
  for (const auto& ra : a.rows) {
    bool matched = false;
    for (std::size_t j = 0; j < b.rows.size(); ++j) {
      const auto& rb = b.rows[j];
      bool eq = std::all_of(keys.begin(), keys.end(), [&](auto k) { return ra[k.first] == rb[k.second]; });
      if (!eq) continue;
      matched = true;
      b_matched[j] = true;
      Row nr = ra;
      for (int k : b_only) nr.push_back(rb[k]);
      out.rows.push_back(std::move(nr));
    }
    if (!matched && outer) {
      Row nr = ra;
      nr.resize(out.columns.size(), Cell::bottom());
      out.rows.push_back(std::move(nr));
    }
  }
  if (outer) {
    for (std::size_t j = 0; j < b.rows.size(); ++j) {
      if (b_matched[j]) continue;
      Row nr(out.columns.size(), Cell::bottom());
      for (std::size_t i = 0; i < a.columns.size(); ++i) {
        int bc = b.col(a.columns[i]);
        if (bc >= 0) nr[i] = b.rows[j][bc];
      }
      for (std::size_t k = 0; k < b_only.size(); ++k) nr[a.columns.size() + k] = b.rows[j][b_only[k]];
      out.rows.push_back(std::move(nr));
    }
  }
  return out;
}

}  // namespace

Relation natural_join(const Relation& a, const Relation& b) { return join_impl(a, b, false); }
Relation natural_outer_join(const Relation& a, const Relation& b) { return join_impl(a, b, true); }

std::vector<Row> row_set(const Relation& r) {
  std::set<Row> s(r.rows.begin(), r.rows.end());
  return {s.begin(), s.end()};
}

bool same_rows(const Relation& a, const Relation& b) {
  if (a.columns.size() != b.columns.size()) return false;
  std::vector<int> perm;
  for (const auto& c : a.columns) {
    int j = b.col(c);
    if (j < 0) return false;
    perm.push_back(j);
  }
  std::set<Row> sa(a.rows.begin(), a.rows.end()), sb;
  for (const auto& row : b.rows) {
    Row nr;
    for (int j : perm) nr.push_back(row[j]);
    sb.insert(std::move(nr));
  }
  return sa == sb;
}

}  // namespace persevo
