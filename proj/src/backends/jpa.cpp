#include <algorithm>

#include "internal.hpp"

namespace persevo {

using detail::CellMap;

namespace {

Relation fresh_table(const Store& s, const ClassTable& ct, const std::string& cls) {
  Relation r;
  r.name = cls;
  r.columns.push_back(kIdColumn);
  for (const auto& f : fields(ct, cls)) r.columns.push_back(f.name);
  r.pk = kIdColumn;
  r.fks = detail::link_fks(s, cls, "");
  return r;
}

std::string table_of(const Store& s, const std::string& cls, const std::string& id) {
  auto it = s.bindings.find(AnnId{id, cls});
  return it != s.bindings.end() ? it->second : cls;
}

// Inserts the row for object `id` of `cls` unless one exists, then follows outgoing links.
Store insert_row(Store s, const ClassTable& ct, const std::string& cls, const std::string& id, const CellMap& cells) {
  std::string name = table_of(s, cls, id);
  Relation r = s.relations.contains(name) ? s.relations.get(name) : fresh_table(s, ct, cls);
  if (!r.has_col(kIdColumn)) throw Error(ErrorKind::Store, "INSERT", "relation " + name + " has no id column", name);
  if (r.find_key(id)) {
    s.bindings[AnnId{id, cls}] = name;
    return s;
  }
  for (const auto& [col, _] : cells)
    if (!r.has_col(col))
      throw Error(ErrorKind::Store, "INSERT", "relation " + name + " has no column " + col, AnnId{id, cls}.str());
  Row row;
  for (const auto& col : r.columns) {
    if (col == kIdColumn) {
      row.push_back(Cell::id(id));
      continue;
    }
    auto it = cells.find(col);
    row.push_back(it != cells.end() ? it->second : Cell::bottom());
  }
  r.rows.push_back(std::move(row));
  s.relations.put(std::move(r));
  s.bindings[AnnId{id, cls}] = name;
  for (const auto& link : detail::links_from(s, cls)) s = insert_row(std::move(s), ct, link.to, id, detail::along(link, cells));
  return s;
}

// Writes `cells` into the row of `id` in the table of `cls`, then follows outgoing links.
Store update_row(Store s, const ClassTable& ct, const std::string& cls, const std::string& id, const CellMap& cells) {
  std::string name = table_of(s, cls, id);
  const Relation* existing = s.relations.find(name);
  if (!existing || !existing->find_key(id)) return insert_row(std::move(s), ct, cls, id, cells);
  Relation r = *existing;
  int key = r.col(kIdColumn);
  for (const auto& [col, _] : cells)
    if (!r.has_col(col))
      throw Error(ErrorKind::Store, "UPDATE", "relation " + name + " has no column " + col, AnnId{id, cls}.str());
  CellMap full;
  for (auto& row : r.rows) {
    if (!(row[key] == Cell::id(id))) continue;
    for (const auto& [col, cell] : cells) row[r.col(col)] = cell;
    for (std::size_t i = 0; i < r.columns.size(); ++i) full[r.columns[i]] = row[i];
  }
  s.relations.put(std::move(r));
  for (const auto& link : detail::links_from(s, cls)) {
    auto target = table_of(s, link.to, id);
    const Relation* t = s.relations.find(target);
    // A missing linked part is filled from the whole row, not just the changed columns.
    bool present = t && t->find_key(id);
    s = update_row(std::move(s), ct, link.to, id, detail::along(link, present ? cells : full));
  }
  return s;
}

}  // namespace

std::string jpa_select(const Store& s, const ClassTable&, const AnnId& obj, const std::string& field) {
  const auto& name = detail::bound_relation(s, obj, "SELECT");
  const Relation& r = s.relations.get(name);
  int c = r.col(field);
  if (c < 0) throw Error(ErrorKind::Store, "SELECT", "relation " + name + " has no column " + field, obj.str());
  const Row* row = r.find_key(obj.id);
  if (!row) throw Error(ErrorKind::Store, "SELECT", "relation " + name + " has no row for #" + obj.id, obj.str());
  const Cell& cell = (*row)[c];
  if (cell.kind != Cell::Kind::Value)
    throw Error(ErrorKind::Store, "SELECT", "field " + field + " of " + obj.str() + " is unbound", obj.str());
  return cell.value;
}

Store jpa_insert(const Store& s, const ClassTable& ct, const std::string& cls, const std::string& id, const Ids& vals) {
  detail::check_arity(ct, cls, vals.size(), false, "INSERT", AnnId{id, cls}.str());
  CellMap cells;
  auto fs = fields(ct, cls);
  for (std::size_t i = 0; i < fs.size(); ++i) cells[fs[i].name] = Cell::id(vals[i]);
  return insert_row(s, ct, cls, id, cells);
}

Store jpa_update(const Store& s, const ClassTable& ct, const AnnId& obj, const Ids& vals) {
  const auto& name = detail::bound_relation(s, obj, "UPDATE");
  detail::check_arity(ct, obj.cls, vals.size(), true, "UPDATE", obj.str());
  if (!s.relations.get(name).find_key(obj.id))
    throw Error(ErrorKind::Store, "UPDATE", "relation " + name + " has no row for #" + obj.id, obj.str());
  CellMap cells;
  auto fs = fields(ct, obj.cls);
  for (std::size_t i = 0; i < vals.size(); ++i) cells[fs[i].name] = Cell::id(vals[i]);
  return update_row(s, ct, obj.cls, obj.id, cells);
}

namespace {

[[noreturn]] void premise(const std::string& rule, const std::string& msg, const std::string& path) {
  throw Error(ErrorKind::Premise, rule, msg, path);
}

std::vector<std::string> names_of(const std::vector<FieldDecl>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.name);
  return out;
}

RelationSet materialize(const RelationSet& rs, const Store& s, const ClassTable& ct, const std::string& cls) {
  if (rs.contains(cls)) return rs;
  RelationSet out = rs;
  out.put(fresh_table(s, ct, cls));
  return out;
}

}  // namespace

RelationSet jpa_evolve_schema(const EvolutionOp& op, const Store& s, const ClassTable& ct) {
  RelationSet rs = s.relations;
  const std::string& c = op.cls;
  switch (op.kind) {
    case OpKind::NewClass: {
      std::vector<std::string> cols{kIdColumn};
      for (const auto& n : names_of(fields(ct, op.other))) cols.push_back(n);
      for (const auto& n : op.names) cols.push_back(n);
      rs = smo_create_table(rs, c, cols);
      Relation r = rs.get(c);
      r.pk = kIdColumn;
      rs.put(std::move(r));
      return rs;
    }
    case OpKind::RenameClass:
      return rs.contains(c) ? smo_rename_table(rs, c, op.other) : rs;
    case OpKind::RenameField:
      for (const auto& x : detail::with_subclasses(ct, c))
        if (rs.contains(x)) rs = smo_rename_column(rs, x, op.names, op.news);
      return rs;
    case OpKind::AddField: {
      std::vector<ColumnInit> inits;
      for (const auto& d : op.defaults) inits.push_back([d](const Relation&, const Row&) { return Cell::id(d); });
      for (const auto& x : detail::with_subclasses(ct, c))
        if (rs.contains(x)) rs = smo_add_column(rs, x, op.names, inits);
      return rs;
    }
    case OpKind::DeleteField:
      for (const auto& x : detail::with_subclasses(ct, c))
        if (rs.contains(x)) rs = smo_drop_column(rs, x, op.names).first;
      return rs;
    case OpKind::ChangeFieldType:
      for (const auto& x : detail::with_subclasses(ct, c))
        if (rs.contains(x)) rs = detail::drop_and_readd(rs, x, op.names);
      return rs;
    case OpKind::NewSupClass: {
      const auto& decl = ct.at(c);
      std::vector<std::string> shared = names_of(fields(ct, decl.super));
      for (const auto& g : op.names) shared.push_back(g);
      rs = materialize(rs, s, ct, c);
      std::vector<std::string> cols2{kIdColumn};
      cols2.insert(cols2.end(), shared.begin(), shared.end());
      rs = smo_decompose(rs, c, c, rs.get(c).columns, op.other, cols2, shared);
      return rs;
    }
    case OpKind::MergeClass: {
      const std::string& d = op.other;
      rs = materialize(rs, s, ct, c);
      rs = materialize(rs, s, ct, d);
      const Relation& rc = rs.get(c);
      for (const auto& col : shared_columns(rc, rs.get(d))) {
        if (col == kIdColumn) continue;
        bool is_fk = std::any_of(rc.fks.begin(), rc.fks.end(), [&](const ForeignKey& fk) {
          return fk.column == col && fk.ref_relation == d && fk.ref_column == col;
        });
        if (!is_fk) premise("MergeClass", "shared column " + col + " of " + c + " is not a foreign key to " + d, c);
      }
      return smo_join(rs, c, d, c, false);
    }
    case OpKind::DeleteClass:
      if (rs.contains(c)) rs.erase(c);
      return rs;
  }
  return rs;
}

}  // namespace persevo
