#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "persevo/backends.hpp"

namespace persevo::detail {

/** Column name to cell for one written object. */
using CellMap = std::map<std::string, Cell>;

inline std::vector<Link> links_from(const Store& s, const std::string& cls) {
  std::vector<Link> out;
  for (const auto& l : s.links)
    if (l.from == cls) out.push_back(l);
  return out;
}

/** c followed by every class below it, in class-table order. */
inline std::vector<std::string> with_subclasses(const ClassTable& ct, const std::string& c) {
  std::vector<std::string> out{c};
  if (!is_class(ct, c)) return out;
  for (const auto& [name, _] : ct)
    if (name != c && subtype(ct, name, c)) out.push_back(name);
  return out;
}

/** Projects a written object's cells onto a link's target columns. */
inline CellMap along(const Link& link, const CellMap& cells) {
  CellMap out;
  for (const auto& [src, dst] : link.pairs) {
    auto it = cells.find(src);
    if (it != cells.end()) out[dst] = it->second;
  }
  return out;
}

/** Foreign keys a fresh relation of `cls` carries; targets are named link.to + suffix. */
inline std::vector<ForeignKey> link_fks(const Store& s, const std::string& cls, const std::string& suffix) {
  std::vector<ForeignKey> out;
  for (const auto& l : links_from(s, cls))
    for (const auto& [src, dst] : l.pairs) out.push_back({src, l.to + suffix, dst});
  return out;
}

inline const std::string& bound_relation(const Store& s, const AnnId& a, const std::string& rule) {
  auto it = s.bindings.find(a);
  if (it == s.bindings.end()) throw Error(ErrorKind::Store, rule, a.str() + " is not bound in the store", a.str());
  if (!s.relations.contains(it->second))
    throw Error(ErrorKind::Store, rule, a.str() + " is bound to missing relation " + it->second, a.str());
  return it->second;
}

inline void check_arity(const ClassTable& ct, const std::string& cls, std::size_t n, bool prefix,
                        const std::string& rule, const std::string& path) {
  std::size_t want = fields(ct, cls).size();
  if (prefix ? n > want : n != want)
    throw Error(ErrorKind::Store, rule,
                "arity mismatch: class " + cls + " has " + std::to_string(want) + " field(s), got " +
                    std::to_string(n) + " value(s)",
                path);
}

/** ChangeFieldType on one relation: the columns move to the end and keep their values. */
inline RelationSet drop_and_readd(const RelationSet& rs, const std::string& rel, const std::vector<std::string>& cols) {
  auto [out, dropped] = smo_drop_column(rs, rel, cols);
  auto vals = std::make_shared<DroppedValues>(std::move(dropped));
  std::vector<ColumnInit> inits;
  for (std::size_t i = 0; i < cols.size(); ++i)
    inits.push_back([vals, i, k = std::size_t{0}](const Relation&, const Row&) mutable { return vals->rows[k++].second[i]; });
  return smo_add_column(out, rel, cols, inits);
}

}  // namespace persevo::detail
