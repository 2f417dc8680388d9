#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "persevo/backends.hpp"
#include "persevo/relstore.hpp"
#include "persevo/syntax.hpp"
#include "persevo/typing.hpp"

namespace persevo {

/**
 * What older versions need once an op has run. `stash` keeps DeleteField
 * values by (identifier, field); `orphans` keeps MergeClass superclass
 * objects that had no subclass part, by identifier then field. Field and
 * class names are the ones before the op.
 */
struct VersionPayload {
  std::map<std::pair<std::string, std::string>, std::string> stash;
  std::map<std::string, std::map<std::string, std::string>> orphans;

  bool operator==(const VersionPayload&) const = default;
};

struct VersionEntry {
  std::size_t version = 0;
  ClassTable ct;
  ExprPtr main;
  StoreEnv sigma;
  std::optional<EvolutionOp> op;
  VersionPayload payload;
};

/** Linear version history. The store is materialized at the last entry only. */
struct VersionCatalog {
  BackendKind backend = BackendKind::Jpa;
  std::vector<VersionEntry> entries;
  /** Lossy write translations made in this session; not persisted. */
  std::vector<std::string> notes;

  std::size_t latest() const { return entries.empty() ? 0 : entries.size() - 1; }
  const VersionEntry& at(std::size_t k) const;
};

VersionCatalog initial_catalog(const ClassTable& ct, const ExprPtr& main, const Store& store, BackendKind backend);

/** Payload for `op` read off the store before the op. */
VersionPayload compute_payload(const EvolutionOp& op, const Store& pre, const ClassTable& pre_ct, const Backend& backend);

/** Appends version `version`; throws unless it is exactly latest + 1. */
void register_version(VersionCatalog& cat, std::size_t version, const EvolutionOp& op, const ClassTable& ct,
                      const ExprPtr& main, const StoreEnv& sigma, VersionPayload payload);

std::string print_catalog(const VersionCatalog& cat);
VersionCatalog parse_catalog(const std::string& text);

/** Select at version k's schema. `obj` and `field` use version k's names. */
std::string read_at_version(const VersionCatalog& cat, const Store& store, std::size_t k, const AnnId& obj,
                            const std::string& field);

/** Insert at version k; values follow fields(cls) of version k. */
Store insert_at_version(VersionCatalog& cat, const Store& store, std::size_t k, const std::string& cls,
                        const std::string& id, const Ids& vals);

/** Update at version k; values are a prefix of fields(obj.cls) of version k. */
Store update_at_version(VersionCatalog& cat, const Store& store, std::size_t k, const AnnId& obj, const Ids& vals);

/** Most specific class of `id` as seen by version k. */
AnnId annotate_at_version(const VersionCatalog& cat, const Store& store, std::size_t k, const std::string& id);

/** Objects visible at version k with their field values (⊥ when unreadable), sorted by identifier. */
struct ViewObject {
  AnnId obj;
  std::vector<std::pair<std::string, std::string>> fields;
};
std::vector<ViewObject> derived_view(const VersionCatalog& cat, const Store& store, std::size_t k);
std::string print_view(const std::vector<ViewObject>& view, std::size_t k);

/** Query semantics of version k over the latest store; writes may update the catalog stash. */
class VersionView : public QuerySemantics {
 public:
  VersionView(VersionCatalog& cat, std::size_t k);

  std::string select(const Store& s, const ClassTable& ct, const AnnId& obj, const std::string& field) const override;
  Store insert(const Store& s, const ClassTable& ct, const std::string& cls, const std::string& id,
               const Ids& vals) const override;
  Store update(const Store& s, const ClassTable& ct, const AnnId& obj, const Ids& vals) const override;
  AnnId annotate(const Store& s, const ClassTable& ct, const std::string& id) const override;

  std::size_t version() const { return k_; }

 private:
  VersionCatalog* cat_;
  std::size_t k_;
};

}  // namespace persevo
