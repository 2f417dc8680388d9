#include <algorithm>

#include "internal.hpp"

namespace persevo {

using detail::CellMap;

namespace {

std::string table_of(const Store& s, const std::string& cls, const std::string& id) {
  auto it = s.bindings.find(AnnId{id, cls});
  return it != s.bindings.end() ? it->second : cls + "_" + id;
}

Row make_row(const Relation& r, const Cell& time, const CellMap& cells) {
  Row row;
  for (const auto& col : r.columns) {
    if (col == kTimeColumn) {
      row.push_back(time);
      continue;
    }
    auto it = cells.find(col);
    row.push_back(it != cells.end() ? it->second : Cell::bottom());
  }
  return row;
}

void require_cols(const Relation& r, const CellMap& cells, const std::string& rule, const std::string& path) {
  for (const auto& [col, _] : cells)
    if (!r.has_col(col)) throw Error(ErrorKind::Store, rule, "relation " + r.name + " has no column " + col, path);
}

// Appends a row stamped `time` to the relation of object `id` of `cls`, creating the
// relation if needed, then follows outgoing links. With `only_new` set an existing
// relation is left alone.
Store write(Store s, const ClassTable& ct, const std::string& cls, const std::string& id, const Cell& time,
            const CellMap& cells, bool only_new) {
  std::string name = table_of(s, cls, id);
  std::string path = AnnId{id, cls}.str();
  Relation r;
  if (const Relation* existing = s.relations.find(name)) {
    if (only_new) {
      s.bindings[AnnId{id, cls}] = name;
      return s;
    }
    r = *existing;
  } else {
    r.name = name;
    r.columns.push_back(kTimeColumn);
    for (const auto& f : fields(ct, cls)) r.columns.push_back(f.name);
    r.fks = detail::link_fks(s, cls, "_" + id);
  }
  require_cols(r, cells, only_new ? "INSERT" : "UPDATE", path);
  r.rows.push_back(make_row(r, time, cells));
  s.relations.put(std::move(r));
  s.bindings[AnnId{id, cls}] = name;
  for (const auto& link : detail::links_from(s, cls))
    s = write(std::move(s), ct, link.to, id, time, detail::along(link, cells), only_new);
  return s;
}

std::uint64_t time_of(const Relation& r, const Row& row) {
  int t = r.col(kTimeColumn);
  return t >= 0 && row[t].kind == Cell::Kind::Time ? row[t].time : 0;
}

}  // namespace

std::uint64_t next_timestamp(const Store& s) {
  std::uint64_t latest = 0;
  for (const auto& r : s.relations)
    for (const auto& row : r.rows) latest = std::max(latest, time_of(r, row));
  return latest + 1;
}

std::string sig_select(const Store& s, const ClassTable&, const AnnId& obj, const std::string& field) {
  const auto& name = detail::bound_relation(s, obj, "SELECT");
  const Relation& r = s.relations.get(name);
  int c = r.col(field);
  if (c < 0) throw Error(ErrorKind::Store, "SELECT", "relation " + name + " has no column " + field, obj.str());
  const Row* best = nullptr;
  for (const auto& row : r.rows) {
    if (row[c].kind != Cell::Kind::Value) continue;
    if (!best || time_of(r, row) > time_of(r, *best)) best = &row;
  }
  if (!best) throw Error(ErrorKind::Store, "SELECT", "field " + field + " of " + obj.str() + " is unbound", obj.str());
  return (*best)[c].value;
}

Store sig_insert(const Store& s, const ClassTable& ct, const std::string& cls, const std::string& id, const Ids& vals) {
  detail::check_arity(ct, cls, vals.size(), false, "INSERT", AnnId{id, cls}.str());
  CellMap cells;
  auto fs = fields(ct, cls);
  for (std::size_t i = 0; i < fs.size(); ++i) cells[fs[i].name] = Cell::id(vals[i]);
  return write(s, ct, cls, id, Cell::bottom(), cells, true);
}

Store sig_update(const Store& s, const ClassTable& ct, const AnnId& obj, const Ids& vals) {
  detail::bound_relation(s, obj, "UPDATE");
  detail::check_arity(ct, obj.cls, vals.size(), true, "UPDATE", obj.str());
  CellMap cells;
  auto fs = fields(ct, obj.cls);
  for (std::size_t i = 0; i < vals.size(); ++i) cells[fs[i].name] = Cell::id(vals[i]);
  return write(s, ct, obj.cls, obj.id, Cell::at(next_timestamp(s)), cells, false);
}

namespace {

[[noreturn]] void premise(const std::string& rule, const std::string& msg, const std::string& path) {
  throw Error(ErrorKind::Premise, rule, msg, path);
}

// Bound (identifier, relation) pairs of class `cls`, in identifier order.
std::vector<std::pair<std::string, std::string>> objects_of(const Store& s, const std::string& cls) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, r] : s.bindings)
    if (a.cls == cls && s.relations.contains(r)) out.emplace_back(a.id, r);
  return out;
}

}  // namespace

RelationSet sig_evolve_schema(const EvolutionOp& op, const Store& s, const ClassTable& ct) {
  RelationSet rs = s.relations;
  const std::string& c = op.cls;
  auto objs = objects_of(s, c);
  // Objects of c and of its subclasses; field operations reach inherited columns too.
  std::vector<std::pair<std::string, std::string>> family;
  if (is_class(ct, c))
    for (const auto& x : detail::with_subclasses(ct, c))
      for (auto& o : objects_of(s, x)) family.push_back(std::move(o));
  switch (op.kind) {
    case OpKind::NewClass:
      return rs;
    case OpKind::RenameClass:
      for (const auto& [id, r] : objs) rs = smo_rename_table(rs, r, op.other + "_" + id);
      return rs;
    case OpKind::RenameField:
      for (const auto& [id, r] : family) rs = smo_rename_column(rs, r, op.names, op.news);
      return rs;
    case OpKind::AddField: {
      std::vector<ColumnInit> inits;
      for (const auto& d : op.defaults) inits.push_back([d](const Relation&, const Row&) { return Cell::id(d); });
      for (const auto& [id, r] : family) rs = smo_add_column(rs, r, op.names, inits);
      return rs;
    }
    case OpKind::DeleteField:
      for (const auto& [id, r] : family) rs = smo_drop_column(rs, r, op.names).first;
      return rs;
    case OpKind::ChangeFieldType:
      for (const auto& [id, r] : family) rs = detail::drop_and_readd(rs, r, op.names);
      return rs;
    case OpKind::NewSupClass: {
      std::vector<std::string> shared;
      for (const auto& f : fields(ct, ct.at(c).super)) shared.push_back(f.name);
      for (const auto& g : op.names) shared.push_back(g);
      std::vector<std::string> cols2{kTimeColumn};
      cols2.insert(cols2.end(), shared.begin(), shared.end());
      for (const auto& [id, r] : objs) rs = smo_decompose(rs, r, r, rs.get(r).columns, op.other + "_" + id, cols2, shared);
      return rs;
    }
    case OpKind::MergeClass: {
      const std::string& d = op.other;
      std::map<std::string, std::string> parts;
      for (const auto& [id, r] : objects_of(s, d)) parts[id] = r;
      for (const auto& [id, r] : objs)
        if (!parts.count(id)) premise("MergeClass", "object #" + id + " of " + c + " has no " + d + " part", AnnId{id, c}.str());
      for (const auto& [id, r] : parts)
        if (std::none_of(objs.begin(), objs.end(), [&](const auto& o) { return o.first == id; }))
          premise("MergeClass", "relation " + r + " has no matching " + c + " object", AnnId{id, d}.str());
      for (const auto& [id, rc_name] : objs) {
        const std::string& rd_name = parts.at(id);
        const Relation& rc = rs.get(rc_name);
        for (const auto& col : shared_columns(rc, rs.get(rd_name))) {
          if (col == kTimeColumn) continue;
          bool is_fk = std::any_of(rc.fks.begin(), rc.fks.end(), [&](const ForeignKey& fk) {
            return fk.column == col && fk.ref_relation == rd_name && fk.ref_column == col;
          });
          if (!is_fk)
            premise("MergeClass", "shared column " + col + " of " + rc_name + " is not a foreign key to " + rd_name,
                    AnnId{id, c}.str());
        }
        rs = smo_join(rs, rc_name, rd_name, rc_name, true);
      }
      return rs;
    }
    case OpKind::DeleteClass:
      for (const auto& [id, r] : objs) rs.erase(r);
      return rs;
  }
  return rs;
}

}  // namespace persevo
