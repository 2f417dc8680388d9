#include <algorithm>
#include <set>

#include "persevo/relstore.hpp"

namespace persevo {

namespace {

[[noreturn]] void smo_error(const std::string& rule, const std::string& msg, const std::string& where) {
  throw Error(ErrorKind::Premise, rule, msg, where);
}

// Rebuilds rs with `old_name` replaced by `r` at the same position.
RelationSet replace_at(const RelationSet& rs, const std::string& old_name, Relation r) {
  RelationSet out;
  for (const auto& x : rs) {
    if (x.name == old_name)
      out.put(r);
    else
      out.put(x);
  }
  return out;
}

// Applies f to the foreign keys of every relation except `skip`.
template <typename F>
RelationSet map_foreign_refs(const RelationSet& rs, const std::string& skip, F f) {
  RelationSet out;
  for (auto r : rs) {
    if (r.name != skip) {
      std::vector<ForeignKey> kept;
      for (auto fk : r.fks)
        if (f(fk)) kept.push_back(fk);
      r.fks = std::move(kept);
    }
    out.put(std::move(r));
  }
  return out;
}

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace

RelationSet smo_create_table(const RelationSet& rs, const std::string& name, const std::vector<std::string>& cols) {
  if (rs.contains(name)) smo_error("CREATE TABLE", "relation " + name + " already exists", name);
  std::set<std::string> seen;
  for (const auto& c : cols)
    if (!seen.insert(c).second) smo_error("CREATE TABLE", "duplicate column " + c, name);
  RelationSet out = rs;
  Relation r;
  r.name = name;
  r.columns = cols;
  out.put(std::move(r));
  return out;
}

RelationSet smo_rename_table(const RelationSet& rs, const std::string& c, const std::string& d) {
  if (!rs.contains(c)) smo_error("RENAME TABLE", "no relation named " + c, c);
  if (c == d) return rs;
  if (rs.contains(d)) smo_error("RENAME TABLE", "relation " + d + " already exists", d);
  Relation r = rs.get(c);
  r.name = d;
  for (auto& fk : r.fks)
    if (fk.ref_relation == c) fk.ref_relation = d;
  RelationSet out = replace_at(rs, c, std::move(r));
  return map_foreign_refs(out, d, [&](ForeignKey& fk) {
    if (fk.ref_relation == c) fk.ref_relation = d;
    return true;
  });
}

RelationSet smo_rename_column(const RelationSet& rs, const std::string& c, const std::vector<std::string>& olds,
                              const std::vector<std::string>& news) {
  const Relation& r = rs.get(c);
  for (std::size_t i = 0; i < news.size() && i < olds.size(); ++i)
    if (r.has_col(news[i]) && !contains(olds, news[i]))
      smo_error("RENAME COLUMN", "column " + news[i] + " already exists", c);
  Relation nr = rename_attrs(r, olds, news);
  auto map_col = [&](const std::string& col) {
    for (std::size_t i = 0; i < olds.size(); ++i)
      if (olds[i] == col) return news[i];
    return col;
  };
  for (auto& fk : nr.fks)
    if (fk.ref_relation == c) fk.ref_column = map_col(fk.ref_column);
  RelationSet out = replace_at(rs, c, std::move(nr));
  return map_foreign_refs(out, c, [&](ForeignKey& fk) {
    if (fk.ref_relation == c) fk.ref_column = map_col(fk.ref_column);
    return true;
  });
}

RelationSet smo_add_column(const RelationSet& rs, const std::string& c, const std::vector<std::string>& cols,
                           const std::vector<ColumnInit>& inits) {
  if (cols.size() != inits.size()) smo_error("ADD COLUMN", "column and initializer counts differ", c);
  const Relation& orig = rs.get(c);
  Relation r = orig;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (r.has_col(cols[i])) smo_error("ADD COLUMN", "column " + cols[i] + " already exists", c);
    // Initializers see the relation as it was before the operation.
    Relation next = r;
    next.columns.push_back(cols[i]);
    for (std::size_t k = 0; k < r.rows.size(); ++k) next.rows[k].push_back(inits[i](orig, orig.rows[k]));
    r = std::move(next);
  }
  return replace_at(rs, c, std::move(r));
}

std::pair<RelationSet, DroppedValues> smo_drop_column(const RelationSet& rs, const std::string& c,
                                                      const std::vector<std::string>& cols) {
  const Relation& r = rs.get(c);
  for (const auto& col : cols) {
    r.require_col(col);
    if ((r.pk && *r.pk == col) || col == kIdColumn) smo_error("DROP COLUMN", "cannot drop key column " + col, c);
    if (col == kTimeColumn) smo_error("DROP COLUMN", "cannot drop time column", c);
  }
  DroppedValues dropped;
  dropped.columns = cols;
  int key = r.col(kIdColumn);
  if (key < 0) key = r.col(kTimeColumn);
  for (const auto& row : r.rows) {
    std::vector<Cell> vals;
    for (const auto& col : cols) vals.push_back(row[r.col(col)]);
    dropped.rows.emplace_back(key >= 0 ? row[key] : Cell::bottom(), std::move(vals));
  }
  RelationSet out = replace_at(rs, c, drop_columns(r, cols));
  out = map_foreign_refs(out, c, [&](ForeignKey& fk) { return !(fk.ref_relation == c && contains(cols, fk.ref_column)); });
  return {std::move(out), std::move(dropped)};
}

RelationSet smo_decompose(const RelationSet& rs, const std::string& c, const std::string& c1,
                          const std::vector<std::string>& cols1, const std::string& c2,
                          const std::vector<std::string>& cols2, const std::vector<std::string>& fk_cols) {
  const Relation& r = rs.get(c);
  for (const auto& col : cols1)
    if (!r.has_col(col)) smo_error("DECOMPOSE", "column " + col + " not in " + c, c);
  for (const auto& col : cols2)
    if (!r.has_col(col)) smo_error("DECOMPOSE", "column " + col + " not in " + c, c);
  for (const auto& col : fk_cols)
    if (!contains(cols1, col) || !contains(cols2, col))
      smo_error("DECOMPOSE", "foreign-key column " + col + " must appear in both outputs", c);
  if (c1 == c2) smo_error("DECOMPOSE", "output relations must differ", c);
  for (const auto& n : {c1, c2})
    if (n != c && rs.contains(n)) smo_error("DECOMPOSE", "relation " + n + " already exists", n);

  Relation r1 = project(r, cols1);
  r1.name = c1;
  Relation r2 = project(r, cols2);
  r2.name = c2;
  for (const auto& col : fk_cols) {
    ForeignKey fk{col, c2, col};
    if (std::find(r1.fks.begin(), r1.fks.end(), fk) == r1.fks.end()) r1.fks.push_back(fk);
  }
  RelationSet out;
  for (const auto& x : rs) {
    if (x.name != c) {
      out.put(x);
      continue;
    }
    // The output that keeps c's name takes c's position; the other follows it.
    if (c1 == c) {
      out.put(r1);
      out.put(r2);
    } else if (c2 == c) {
      out.put(r2);
      out.put(r1);
    } else {
      out.put(r1);
      out.put(r2);
    }
  }
  return out;
}

RelationSet smo_join(const RelationSet& rs, const std::string& c1, const std::string& c2, const std::string& out_name,
                     bool outer) {
  const char* rule = outer ? "OUTER JOIN TABLE" : "JOIN TABLE";
  if (!rs.contains(c1)) smo_error(rule, "no relation named " + c1, c1);
  if (!rs.contains(c2)) smo_error(rule, "no relation named " + c2, c2);
  if (out_name != c1 && out_name != c2 && rs.contains(out_name))
    smo_error(rule, "relation " + out_name + " already exists", out_name);
  Relation j = outer ? natural_outer_join(rs.get(c1), rs.get(c2)) : natural_join(rs.get(c1), rs.get(c2));
  j.name = out_name;
  std::erase_if(j.fks, [&](const ForeignKey& fk) { return fk.ref_relation == c1 || fk.ref_relation == c2; });
  RelationSet out;
  bool placed = false;
  for (const auto& x : rs) {
    if (x.name == c1 || x.name == c2) {
      if (!placed) {
        out.put(j);
        placed = true;
      }
      continue;
    }
    out.put(x);
  }
  return map_foreign_refs(out, out_name, [&](ForeignKey& fk) {
    if (fk.ref_relation == c1 || fk.ref_relation == c2) fk.ref_relation = out_name;
    return true;
  });
}

}  // namespace persevo
