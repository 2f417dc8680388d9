#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "persevo/relstore.hpp"
#include "persevo/syntax.hpp"
#include "persevo/typing.hpp"

namespace persevo {

using Ids = std::vector<std::string>;

/**
 * Select/Insert/Update over a store. Stored cells hold raw identifiers;
 * class tags are recovered through annotate.
 *
 * Update takes values for a prefix of fields(C) of the receiver's class C;
 * columns past the prefix keep their current value.
 */
class QuerySemantics {
 public:
  virtual ~QuerySemantics() = default;
  virtual std::string select(const Store& s, const ClassTable& ct, const AnnId& obj, const std::string& field) const = 0;
  virtual Store insert(const Store& s, const ClassTable& ct, const std::string& cls, const std::string& id,
                       const Ids& vals) const = 0;
  virtual Store update(const Store& s, const ClassTable& ct, const AnnId& obj, const Ids& vals) const = 0;
  virtual AnnId annotate(const Store& s, const ClassTable& ct, const std::string& id) const;
};

enum class BackendKind { Jpa, Signal };

class Backend : public QuerySemantics {
 public:
  virtual BackendKind kind() const = 0;
  /** Relation holding object `id` of class `cls`. */
  virtual std::string relation_name(const std::string& cls, const std::string& id) const = 0;
  /** Schema effect of an evolution operation; `ct` is the class table before the operation. */
  virtual RelationSet evolve_schema(const EvolutionOp& op, const Store& s, const ClassTable& ct) const = 0;
};

const Backend& jpa_backend();
const Backend& signal_backend();
const Backend& backend_for(BackendKind k);
BackendKind parse_backend(const std::string& name);
std::string backend_name(BackendKind k);

/** Most specific class among the bindings of l. */
AnnId annotate(const Store& s, const ClassTable& ct, const std::string& l);
/** Relation names bound by objects of exactly class `cls`, in relation order. */
std::vector<std::string> relations_of_class(const Store& s, const std::string& cls);

std::string jpa_select(const Store& s, const ClassTable& ct, const AnnId& obj, const std::string& field);
Store jpa_insert(const Store& s, const ClassTable& ct, const std::string& cls, const std::string& id, const Ids& vals);
Store jpa_update(const Store& s, const ClassTable& ct, const AnnId& obj, const Ids& vals);
RelationSet jpa_evolve_schema(const EvolutionOp& op, const Store& s, const ClassTable& ct);

std::string sig_select(const Store& s, const ClassTable& ct, const AnnId& obj, const std::string& field);
Store sig_insert(const Store& s, const ClassTable& ct, const std::string& cls, const std::string& id, const Ids& vals);
Store sig_update(const Store& s, const ClassTable& ct, const AnnId& obj, const Ids& vals);
RelationSet sig_evolve_schema(const EvolutionOp& op, const Store& s, const ClassTable& ct);
/** Next signal timestamp: one past the largest time stored anywhere in the store. */
std::uint64_t next_timestamp(const Store& s);

}  // namespace persevo
