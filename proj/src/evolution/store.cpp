#include <algorithm>

#include "persevo/evolution.hpp"

namespace persevo {

ExprPtr evolve_expr(const EvolutionOp& op, const ExprPtr& e, const ClassTable& ct, const StoreEnv& sigma) {
  switch (op.kind) {
    case OpKind::RenameClass:
      return rename_class(e, op.cls, op.other);
    case OpKind::RenameField:
      return rename_field(e, ct, op.cls, op.names, op.news, {}, sigma);
    case OpKind::AddField: {
      std::vector<ExprPtr> defaults;
      for (const auto& d : op.defaults) defaults.push_back(make_raw(d));
      return expand(e, ct, op.cls, defaults, {}, sigma);
    }
    default:
      return e;
  }
}

StoreEnv evolve_store_env(const EvolutionOp& op, const StoreEnv& sigma) {
  StoreEnv out;
  for (const auto& [a, c] : sigma) {
    switch (op.kind) {
      case OpKind::RenameClass: {
        std::string nc = rename_class(c, op.cls, op.other);
        out[AnnId{a.id, rename_class(a.cls, op.cls, op.other)}] = nc;
        break;
      }
      case OpKind::NewSupClass:
        out[a] = c;
        if (a.cls == op.cls) out[AnnId{a.id, op.other}] = op.other;
        break;
      case OpKind::MergeClass:
      case OpKind::DeleteClass:
        if (a.cls != (op.kind == OpKind::MergeClass ? op.other : op.cls)) out[a] = c;
        break;
      default:
        out[a] = c;
    }
  }
  return out;
}

namespace {

std::vector<Link> evolve_links(const EvolutionOp& op, const std::vector<Link>& links, const ClassTable& ct) {
  auto renamed = [&](const std::string& col) {
    auto it = std::find(op.names.begin(), op.names.end(), col);
    return it == op.names.end() ? col : op.news[static_cast<std::size_t>(it - op.names.begin())];
  };
  auto listed = [&](const std::string& col) { return std::find(op.names.begin(), op.names.end(), col) != op.names.end(); };
  std::vector<Link> out;
  switch (op.kind) {
    case OpKind::RenameClass:
      for (auto l : links) {
        l.from = rename_class(l.from, op.cls, op.other);
        l.to = rename_class(l.to, op.cls, op.other);
        out.push_back(std::move(l));
      }
      return out;
    case OpKind::RenameField:
    case OpKind::DeleteField:
      for (auto l : links) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (auto [src, dst] : l.pairs) {
          bool src_hit = l.from == op.cls && listed(src);
          bool dst_hit = l.to == op.cls && listed(dst);
          if (op.kind == OpKind::DeleteField && (src_hit || dst_hit)) continue;
          if (src_hit) src = renamed(src);
          if (dst_hit) dst = renamed(dst);
          pairs.emplace_back(src, dst);
        }
        l.pairs = std::move(pairs);
        out.push_back(std::move(l));
      }
      return out;
    case OpKind::NewSupClass: {
      std::vector<std::string> shared;
      for (const auto& f : fields(ct, ct.at(op.cls).super)) shared.push_back(f.name);
      shared.insert(shared.end(), op.names.begin(), op.names.end());
      for (auto l : links) {
        // Links whose columns all move into the new superclass now start there.
        bool moves = l.from == op.cls && std::all_of(l.pairs.begin(), l.pairs.end(), [&](const auto& p) {
                       return std::find(shared.begin(), shared.end(), p.first) != shared.end();
                     });
        if (moves) l.from = op.other;
        out.push_back(std::move(l));
      }
      Link added{op.cls, op.other, {}};
      for (const auto& s : shared) added.pairs.emplace_back(s, s);
      out.push_back(std::move(added));
      return out;
    }
    case OpKind::MergeClass:
      for (auto l : links) {
        if (l.from == op.cls && l.to == op.other) continue;
        if (l.from == op.other) l.from = op.cls;
        if (l.to == op.other) l.to = op.cls;
        out.push_back(std::move(l));
      }
      return out;
    case OpKind::DeleteClass:
      for (const auto& l : links)
        if (l.from != op.cls && l.to != op.cls) out.push_back(l);
      return out;
    default:
      return links;
  }
}

}  // namespace

Store evolve_store(const EvolutionOp& op, const Store& store, const ClassTable& ct, const Backend& backend) {
  Store out;
  out.relations = backend.evolve_schema(op, store, ct);
  for (const auto& [a, rel] : store.bindings) {
    switch (op.kind) {
      case OpKind::RenameClass:
        if (a.cls == op.cls) {
          std::string moved = rel == backend.relation_name(a.cls, a.id) ? backend.relation_name(op.other, a.id) : rel;
          out.bindings[AnnId{a.id, op.other}] = moved;
        } else {
          out.bindings[a] = rel == backend.relation_name(op.cls, a.id) ? backend.relation_name(op.other, a.id) : rel;
        }
        break;
      case OpKind::NewSupClass:
        out.bindings[a] = rel;
        if (a.cls == op.cls) out.bindings[AnnId{a.id, op.other}] = backend.relation_name(op.other, a.id);
        break;
      case OpKind::MergeClass:
        if (a.cls != op.other) out.bindings[a] = rel;
        break;
      case OpKind::DeleteClass:
        if (a.cls != op.cls) out.bindings[a] = rel;
        break;
      default:
        out.bindings[a] = rel;
    }
  }
  out.links = evolve_links(op, store.links, ct);
  return out;
}

}  // namespace persevo
