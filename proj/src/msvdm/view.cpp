#include <algorithm>
#include <set>
#include <sstream>

#include "persevo/evolution.hpp"
#include "persevo/msvdm.hpp"

namespace persevo {

namespace {

[[noreturn]] void unrecoverable(const std::string& what, std::size_t k) {
  throw Error(ErrorKind::Store, "MSVDM", what + " is unrecoverable at version " + std::to_string(k),
              "version " + std::to_string(k));
}

std::string declaring_class(const ClassTable& ct, const std::string& cls, const std::string& f) {
  if (cls == kObject || !ct.count(cls)) return "";
  for (const auto& k : ancestors(ct, cls))
    if (ct.at(k).field(f)) return k;
  return "";
}

int index_of(const std::vector<std::string>& xs, const std::string& x) {
  auto it = std::find(xs.begin(), xs.end(), x);
  return it == xs.end() ? -1 : static_cast<int>(it - xs.begin());
}

const Backend& backend_of(const VersionCatalog& cat) { return backend_for(cat.backend); }

struct Write {
  std::string cls;
  std::string id;
  std::map<std::string, std::string> vals;
};

// Carries a write from version k to the latest version. Returns false when the
// write ends in the catalog stash instead of the store.
bool forward_write(VersionCatalog& cat, std::size_t k, Write& w, bool is_insert) {
  for (std::size_t j = k + 1; j <= cat.latest(); ++j) {
    const ClassTable& before = cat.entries[j - 1].ct;
    const EvolutionOp& op = *cat.entries[j].op;
    VersionPayload& pay = cat.entries[j].payload;
    switch (op.kind) {
      case OpKind::RenameClass:
        w.cls = rename_class(w.cls, op.cls, op.other);
        break;
      case OpKind::RenameField: {
        std::map<std::string, std::string> next;
        for (const auto& [f, v] : w.vals) {
          int i = index_of(op.names, f);
          bool hit = i >= 0 && declaring_class(before, w.cls, f) == op.cls;
          next[hit ? op.news[i] : f] = v;
        }
        w.vals = std::move(next);
        break;
      }
      case OpKind::AddField:
        if (is_insert && is_class(before, w.cls) && subtype(before, w.cls, op.cls))
          for (std::size_t i = 0; i < op.names.size(); ++i) w.vals[op.names[i]] = op.defaults[i];
        break;
      case OpKind::DeleteField:
        for (const auto& f : op.names) {
          auto it = w.vals.find(f);
          if (it == w.vals.end() || declaring_class(before, w.cls, f) != op.cls) continue;
          pay.stash[{w.id, f}] = it->second;
          cat.notes.push_back("write to deleted field " + f + " of #" + w.id + " kept only for versions before " +
                              std::to_string(j));
          w.vals.erase(it);
        }
        break;
      case OpKind::MergeClass:
        if (w.cls == op.other) {
          if (!is_insert && !pay.orphans.count(w.id)) {
            w.cls = op.cls;
            break;
          }
          auto& orphan = pay.orphans[w.id];
          for (const auto& [f, v] : w.vals) orphan[f] = v;
          cat.notes.push_back("#" + w.id + " of merged class " + op.other + " kept only for versions before " +
                              std::to_string(j));
          return false;
        }
        break;
      default:
        break;
    }
  }
  return true;
}

std::vector<std::string> field_names(const ClassTable& ct, const std::string& cls) {
  std::vector<std::string> out;
  for (const auto& f : fields(ct, cls)) out.push_back(f.name);
  return out;
}

void require_class_at(const ClassTable& ct, const std::string& cls, std::size_t k, const std::string& rule) {
  if (cls == kObject || !ct.count(cls))
    throw Error(ErrorKind::Store, rule, "class " + cls + " does not exist at version " + std::to_string(k), cls);
}

}  // namespace

std::string read_at_version(const VersionCatalog& cat, const Store& store, std::size_t k, const AnnId& obj,
                            const std::string& field) {
  const ClassTable& ct_k = cat.at(k).ct;
  require_class_at(ct_k, obj.cls, k, "SELECT");
  if (index_of(field_names(ct_k, obj.cls), field) < 0)
    throw Error(ErrorKind::Store, "SELECT", "class " + obj.cls + " has no field " + field + " at version " +
                                                std::to_string(k),
                obj.str());
  std::string cls = obj.cls;
  std::string f = field;
  for (std::size_t j = k + 1; j <= cat.latest(); ++j) {
    const ClassTable& before = cat.entries[j - 1].ct;
    const EvolutionOp& op = *cat.entries[j].op;
    const VersionPayload& pay = cat.entries[j].payload;
    switch (op.kind) {
      case OpKind::RenameClass:
        cls = rename_class(cls, op.cls, op.other);
        break;
      case OpKind::RenameField: {
        int i = index_of(op.names, f);
        if (i >= 0 && declaring_class(before, cls, f) == op.cls) f = op.news[i];
        break;
      }
      case OpKind::DeleteField:
        if (index_of(op.names, f) >= 0 && declaring_class(before, cls, f) == op.cls) {
          auto it = pay.stash.find({obj.id, f});
          if (it == pay.stash.end()) unrecoverable("field " + field + " of " + obj.str(), k);
          return it->second;
        }
        break;
      case OpKind::MergeClass:
        if (cls == op.other) {
          auto it = pay.orphans.find(obj.id);
          if (it == pay.orphans.end()) {
            cls = op.cls;
            break;
          }
          auto v = it->second.find(f);
          if (v == it->second.end()) unrecoverable("field " + field + " of " + obj.str(), k);
          return v->second;
        }
        break;
      default:
        break;
    }
  }
  return backend_of(cat).select(store, cat.entries.back().ct, AnnId{obj.id, cls}, f);
}

Store insert_at_version(VersionCatalog& cat, const Store& store, std::size_t k, const std::string& cls,
                        const std::string& id, const Ids& vals) {
  const ClassTable& ct_k = cat.at(k).ct;
  require_class_at(ct_k, cls, k, "INSERT");
  auto names = field_names(ct_k, cls);
  if (names.size() != vals.size())
    throw Error(ErrorKind::Store, "INSERT", "arity mismatch: class " + cls + " has " + std::to_string(names.size()) +
                                                " field(s) at version " + std::to_string(k),
                AnnId{id, cls}.str());
  Write w{cls, id, {}};
  for (std::size_t i = 0; i < names.size(); ++i) w.vals[names[i]] = vals[i];
  if (!forward_write(cat, k, w, true)) return store;
  const ClassTable& latest = cat.entries.back().ct;
  Ids out;
  for (const auto& f : field_names(latest, w.cls)) {
    auto it = w.vals.find(f);
    if (it == w.vals.end())
      throw Error(ErrorKind::Store, "INSERT", "no value for field " + f + " after translation", AnnId{id, cls}.str());
    out.push_back(it->second);
  }
  return backend_of(cat).insert(store, latest, w.cls, id, out);
}

Store update_at_version(VersionCatalog& cat, const Store& store, std::size_t k, const AnnId& obj, const Ids& vals) {
  const ClassTable& ct_k = cat.at(k).ct;
  require_class_at(ct_k, obj.cls, k, "UPDATE");
  auto names = field_names(ct_k, obj.cls);
  if (vals.size() > names.size())
    throw Error(ErrorKind::Store, "UPDATE", "arity mismatch: class " + obj.cls + " has " +
                                                std::to_string(names.size()) + " field(s) at version " +
                                                std::to_string(k),
                obj.str());
  Write w{obj.cls, obj.id, {}};
  for (std::size_t i = 0; i < vals.size(); ++i) w.vals[names[i]] = vals[i];
  if (!forward_write(cat, k, w, false)) return store;
  const ClassTable& latest = cat.entries.back().ct;
  auto latest_names = field_names(latest, w.cls);
  int last = -1;
  for (const auto& [f, v] : w.vals) {
    int i = index_of(latest_names, f);
    if (i < 0) throw Error(ErrorKind::Store, "UPDATE", "field " + f + " has no column after translation", obj.str());
    last = std::max(last, i);
  }
  if (last < 0) return store;
  // Positions inside the prefix that this version did not write keep their current value.
  AnnId target{obj.id, w.cls};
  Ids out;
  for (int i = 0; i <= last; ++i) {
    auto it = w.vals.find(latest_names[i]);
    out.push_back(it != w.vals.end() ? it->second : backend_of(cat).select(store, latest, target, latest_names[i]));
  }
  return backend_of(cat).update(store, latest, target, out);
}

AnnId annotate_at_version(const VersionCatalog& cat, const Store& store, std::size_t k, const std::string& id) {
  const ClassTable& ct_k = cat.at(k).ct;
  std::set<std::string> cands;
  for (auto it = store.bindings.lower_bound(AnnId{id, ""}); it != store.bindings.end() && it->first.id == id; ++it)
    cands.insert(it->first.cls);
  for (std::size_t j = cat.latest(); j > k; --j) {
    const EvolutionOp& op = *cat.entries[j].op;
    switch (op.kind) {
      case OpKind::RenameClass:
        if (cands.erase(op.other)) cands.insert(op.cls);
        break;
      case OpKind::NewClass:
        cands.erase(op.cls);
        break;
      case OpKind::NewSupClass:
        cands.erase(op.other);
        break;
      case OpKind::MergeClass:
        if (cands.count(op.cls) || cat.entries[j].payload.orphans.count(id)) cands.insert(op.other);
        break;
      default:
        break;
    }
  }
  std::vector<std::string> visible;
  for (const auto& c : cands)
    if (c != kObject && ct_k.count(c)) visible.push_back(c);
  if (visible.empty())
    throw Error(ErrorKind::Store, "ANNOTATE", "#" + id + " has no object at version " + std::to_string(k), id);
  try {
    return AnnId{id, most_specific(ct_k, visible, "ANNOTATE", "#" + id)};
  } catch (const Error& e) {
    throw Error(ErrorKind::Store, "ANNOTATE", e.diagnostic().message, id);
  }
}

std::vector<ViewObject> derived_view(const VersionCatalog& cat, const Store& store, std::size_t k) {
  const ClassTable& ct_k = cat.at(k).ct;
  std::set<std::string> ids;
  for (const auto& [a, _] : store.bindings) ids.insert(a.id);
  for (std::size_t j = k + 1; j <= cat.latest(); ++j)
    for (const auto& [id, _] : cat.entries[j].payload.orphans) ids.insert(id);
  std::vector<ViewObject> out;
  for (const auto& id : ids) {
    ViewObject v;
    try {
      v.obj = annotate_at_version(cat, store, k, id);
    } catch (const Error&) {
      continue;
    }
    for (const auto& f : field_names(ct_k, v.obj.cls)) {
      std::string value = "_";
      try {
        value = read_at_version(cat, store, k, v.obj, f);
      } catch (const Error&) {
      }
      v.fields.emplace_back(f, value);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string print_view(const std::vector<ViewObject>& view, std::size_t k) {
  std::ostringstream out;
  out << "view at version " << k << "\n";
  for (const auto& v : view) {
    out << "  object " << v.obj.str() << ":";
    for (std::size_t i = 0; i < v.fields.size(); ++i)
      out << (i ? ", " : " ") << v.fields[i].first << "=" << v.fields[i].second;
    out << "\n";
  }
  return out.str();
}

VersionView::VersionView(VersionCatalog& cat, std::size_t k) : cat_(&cat), k_(k) { cat.at(k); }

std::string VersionView::select(const Store& s, const ClassTable& ct, const AnnId& obj, const std::string& field) const {
  if (k_ == cat_->latest()) return backend_of(*cat_).select(s, ct, obj, field);
  return read_at_version(*cat_, s, k_, obj, field);
}

Store VersionView::insert(const Store& s, const ClassTable& ct, const std::string& cls, const std::string& id,
                          const Ids& vals) const {
  if (k_ == cat_->latest()) return backend_of(*cat_).insert(s, ct, cls, id, vals);
  return insert_at_version(*cat_, s, k_, cls, id, vals);
}

Store VersionView::update(const Store& s, const ClassTable& ct, const AnnId& obj, const Ids& vals) const {
  if (k_ == cat_->latest()) return backend_of(*cat_).update(s, ct, obj, vals);
  return update_at_version(*cat_, s, k_, obj, vals);
}

AnnId VersionView::annotate(const Store& s, const ClassTable& ct, const std::string& id) const {
  if (k_ == cat_->latest()) return backend_of(*cat_).annotate(s, ct, id);
  return annotate_at_version(*cat_, s, k_, id);
}

}  // namespace persevo
