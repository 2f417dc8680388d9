#include "persevo/typing.hpp"

namespace persevo {

std::vector<Diagnostic> check_store_wellformed(const ClassTable& ct, const StoreEnv& sigma, const Store& store) {
  std::vector<Diagnostic> out;
  for (const auto& [a, relname] : store.bindings) {
    std::string path = a.str();
    if (a.cls == kObject || !ct.count(a.cls)) {
      out.push_back({"T-STORE", "binding annotated with unknown class " + a.cls, path});
      continue;
    }
    const Relation* r = store.relations.find(relname);
    if (!r) {
      out.push_back({"T-STORE", "binding targets missing relation " + relname, path});
      continue;
    }
    auto fs = fields(ct, a.cls);
    bool columns_ok = true;
    for (const auto& f : fs)
      if (!r->has_col(f.name)) {
        out.push_back({"T-STORE", "relation " + relname + " has no column for field " + f.name, path});
        columns_ok = false;
      }
    if (!columns_ok) continue;

    std::vector<const Row*> rows;
    int key = r->col(kIdColumn);
    for (const auto& row : r->rows)
      if (key < 0 || (row[key].kind == Cell::Kind::Value && row[key].value == a.id)) rows.push_back(&row);
    if (rows.empty()) {
      out.push_back({"T-STORE", "relation " + relname + " holds no row for #" + a.id, path});
      continue;
    }
    for (const auto& f : fs) {
      int c = r->col(f.name);
      bool has_value = false;
      for (const Row* row : rows) {
        const Cell& cell = (*row)[c];
        if (cell.is_bottom()) continue;
        has_value = true;
        if (cell.kind != Cell::Kind::Value) {
          out.push_back({"T-STORE", "field " + f.name + " holds a non-identifier cell", path});
          continue;
        }
        try {
          std::string t = type_raw_id(ct, sigma, cell.value);
          if (!subtype(ct, t, f.type))
            out.push_back({"T-STORE", "field " + f.name + " holds #" + cell.value + " of type " + t +
                                          ", not a subtype of " + f.type,
                           path});
        } catch (const Error& e) {
          out.push_back({"T-STORE", "field " + f.name + ": " + e.diagnostic().message, path});
        }
      }
      if (!has_value) out.push_back({"T-STORE", "field " + f.name + " has no value", path});
    }
  }
  return out;
}

}  // namespace persevo
