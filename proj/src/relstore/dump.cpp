#include <algorithm>
#include <sstream>

#include "persevo/relstore.hpp"

namespace persevo {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find(", ", start);
    out.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 2;
  }
  return out;
}

[[noreturn]] void bad(int line, const std::string& msg) {
  throw Error(ErrorKind::Syntax, "DUMP", msg, "line " + std::to_string(line));
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

std::string after(const std::string& s, const std::string& p) {
  std::string rest = s.substr(p.size());
  return rest;
}

}  // namespace

std::string dump_store(const Store& s) {
  std::string out;
  for (const auto& r : s.relations) {
    out += "relation " + r.name + "\n";
    out += "  columns: " + join(r.columns) + "\n";
    if (r.pk) out += "  pk: " + *r.pk + "\n";
    for (const auto& fk : r.fks) out += "  fk: " + fk.column + " -> " + fk.ref_relation + "." + fk.ref_column + "\n";
    for (const auto& row : r.rows) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(c.str());
      out += "  row: " + join(cells) + "\n";
    }
  }
  for (const auto& [a, rel] : s.bindings) out += "binding: " + a.id + "@" + a.cls + " -> " + rel + "\n";
  for (const auto& l : s.links) {
    std::vector<std::string> pairs;
    for (const auto& [x, y] : l.pairs) pairs.push_back(x + "=" + y);
    out += "link: " + l.from + " -> " + l.to + ": " + join(pairs) + "\n";
  }
  return out;
}

Store parse_store(const std::string& text) {
  Store s;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  Relation cur;
  bool have = false;
  auto flush = [&] {
    if (have) {
      if (s.relations.contains(cur.name)) bad(n, "duplicate relation " + cur.name);
      s.relations.put(std::move(cur));
    }
    cur = Relation{};
    have = false;
  };
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (starts_with(line, "relation ")) {
      flush();
      cur.name = after(line, "relation ");
      if (!is_valid_name(cur.name)) bad(n, "invalid relation name");
      have = true;
    } else if (starts_with(line, "  ")) {
      if (!have) bad(n, "relation attribute outside a relation");
      std::string body = line.substr(2);
      if (starts_with(body, "columns:")) {
        std::string rest = after(body, "columns:");
        if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
        cur.columns = split_list(rest);
      } else if (starts_with(body, "pk: ")) {
        cur.pk = after(body, "pk: ");
        if (!cur.has_col(*cur.pk)) bad(n, "primary key is not a column");
      } else if (starts_with(body, "fk: ")) {
        std::string rest = after(body, "fk: ");
        auto arrow = rest.find(" -> ");
        auto dot = rest.rfind('.');
        if (arrow == std::string::npos || dot == std::string::npos || dot < arrow) bad(n, "malformed fk line");
        cur.fks.push_back({rest.substr(0, arrow), rest.substr(arrow + 4, dot - arrow - 4), rest.substr(dot + 1)});
      } else if (starts_with(body, "row:")) {
        std::string rest = after(body, "row:");
        if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
        auto vals = split_list(rest);
        if (vals.size() != cur.columns.size()) bad(n, "row width does not match columns");
        Row row;
        for (std::size_t i = 0; i < vals.size(); ++i) {
          const auto& v = vals[i];
          if (v == "_") {
            row.push_back(Cell::bottom());
          } else if (cur.columns[i] == kTimeColumn) {
            if (v.empty() || !std::all_of(v.begin(), v.end(), ::isdigit)) bad(n, "timestamp must be a number");
            row.push_back(Cell::at(std::stoull(v)));
          } else {
            if (!is_valid_name(v)) bad(n, "invalid cell value '" + v + "'");
            row.push_back(Cell::id(v));
          }
        }
        cur.rows.push_back(std::move(row));
      } else {
        bad(n, "unknown relation attribute");
      }
    } else if (starts_with(line, "binding: ")) {
      flush();
      std::string rest = after(line, "binding: ");
      auto at = rest.find('@');
      auto arrow = rest.find(" -> ");
      if (at == std::string::npos || arrow == std::string::npos || at > arrow) bad(n, "malformed binding");
      AnnId a{rest.substr(0, at), rest.substr(at + 1, arrow - at - 1)};
      std::string target = rest.substr(arrow + 4);
      if (!s.relations.contains(target)) bad(n, "binding targets unknown relation " + target);
      s.bindings[a] = target;
    } else if (starts_with(line, "link: ")) {
      flush();
      std::string rest = after(line, "link: ");
      auto arrow = rest.find(" -> ");
      auto colon = rest.find(": ", arrow == std::string::npos ? 0 : arrow);
      if (arrow == std::string::npos) bad(n, "malformed link");
      Link l;
      l.from = rest.substr(0, arrow);
      if (colon == std::string::npos) {
        std::string to = rest.substr(arrow + 4);
        if (!to.empty() && to.back() == ':') to.pop_back();
        l.to = to;
      } else {
        l.to = rest.substr(arrow + 4, colon - arrow - 4);
        for (const auto& p : split_list(rest.substr(colon + 2))) {
          auto eq = p.find('=');
          if (eq == std::string::npos) bad(n, "malformed link pair");
          l.pairs.emplace_back(p.substr(0, eq), p.substr(eq + 1));
        }
      }
      s.links.push_back(std::move(l));
    } else {
      bad(n, "unrecognized line");
    }
  }
  flush();
  return s;
}

Store canonical(const Store& s) {
  std::vector<Relation> rels(s.relations.begin(), s.relations.end());
  std::sort(rels.begin(), rels.end(), [](const Relation& a, const Relation& b) { return a.name < b.name; });
  Store out;
  for (auto& r : rels) {
    std::vector<std::string> cols = r.columns;
    std::sort(cols.begin(), cols.end());
    r = project(r, cols);
    r.rows = row_set(r);
    std::sort(r.fks.begin(), r.fks.end());
    out.relations.put(std::move(r));
  }
  out.bindings = s.bindings;
  out.links = s.links;
  std::sort(out.links.begin(), out.links.end());
  return out;
}

bool same_store(const Store& a, const Store& b) { return canonical(a) == canonical(b); }

std::uint64_t store_hash(const Store& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump_store(canonical(s))) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace persevo
