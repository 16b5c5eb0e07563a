#include <fstream>
#include <sstream>

#include <json.hpp>

#include "depthlab/aic.hpp"
#include "depthlab/error.hpp"

namespace depthlab::aic {

namespace {

constexpr const char* kMagic = "depthlab-complexity-table";
constexpr int kFormatVersion = 1;

std::string hex_or_dash(const Word& w) { return w.empty() ? "-" : bitstrings::to_hex(w); }

Word read_word(std::istream& in, const std::string& context) {
  std::size_t len;
  std::string hex;
  if (!(in >> len >> hex)) throw PreconditionError("table file: malformed " + context);
  if (len == 0) {
    if (hex != "-") throw PreconditionError("table file: empty word must be written as '-'");
    return Word();
  }
  return bitstrings::from_hex(hex, len);
}

void put_producer(std::ostream& os, const char* tag, const Producer& p) {
  os << tag << ' ' << p.program.size() << ' ' << hex_or_dash(p.program) << ' ' << p.steps << '\n';
}

nlohmann::json producer_json(const Producer& p) {
  return {{"program", p.program.str()}, {"bits", p.program.size()}, {"steps", p.steps}};
}

}  // namespace

std::string table_to_text(const ComplexityTable& table) {
  std::ostringstream os;
  os << kMagic << ' ' << kFormatVersion << '\n';
  os << "machine " << table.machine_version() << '\n';
  os << "bounds " << table.bounds().L << ' ' << table.bounds().T << '\n';
  os << "entries " << table.entries().size() << '\n';
  for (const auto& [out, e] : table.entries()) {
    os << "output " << out.size() << ' ' << hex_or_dash(out) << '\n';
    if (e.prefix) put_producer(os, "prefix", *e.prefix);
    if (e.plain) put_producer(os, "plain", *e.plain);
    for (const auto& w : e.witnesses) put_producer(os, "witness", w);
  }
  os << "end\n";
  return os.str();
}

ComplexityTable table_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  int version;
  if (!(in >> tag >> version) || tag != kMagic) throw PreconditionError("not a complexity table");
  if (version != kFormatVersion) {
    throw PreconditionError("unsupported table format version " + std::to_string(version));
  }
  std::string machine;
  Bounds b;
  std::size_t count;
  if (!(in >> tag >> machine) || tag != "machine") throw PreconditionError("table file: no machine");
  if (machine != machine::machine_spec().version) {
    throw PreconditionError("table was built for machine " + machine);
  }
  if (!(in >> tag >> b.L >> b.T) || tag != "bounds") throw PreconditionError("table file: no bounds");
  if (!(in >> tag >> count) || tag != "entries") throw PreconditionError("table file: no count");

  ComplexityTable::Map entries;
  Entry* current = nullptr;
  while (in >> tag) {
    if (tag == "end") {
      if (entries.size() != count) throw PreconditionError("table file: entry count mismatch");
      return ComplexityTable(b, machine, std::move(entries));
    }
    if (tag == "output") {
      current = &entries[read_word(in, "output")];
      continue;
    }
    if (!current) throw PreconditionError("table file: producer before output");
    Producer p{read_word(in, tag), 0};
    if (!(in >> p.steps)) throw PreconditionError("table file: missing steps");
    if (tag == "prefix") {
      current->prefix = std::move(p);
    } else if (tag == "plain") {
      current->plain = std::move(p);
    } else if (tag == "witness") {
      current->witnesses.push_back(std::move(p));
    } else {
      throw PreconditionError("table file: unknown record '" + tag + "'");
    }
  }
  throw PreconditionError("table file: truncated");
}

void save_table(const ComplexityTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << table_to_text(table);
  if (!out) throw Error("write failed: " + path);
}

ComplexityTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return table_from_text(ss.str());
}

std::string table_to_json(const ComplexityTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [out, e] : table.entries()) {
    nlohmann::json j = {{"output", out.str()}};
    j["I_bound"] = e.prefix ? nlohmann::json(e.prefix->program.size()) : nlohmann::json(nullptr);
    j["K_bound"] = e.plain ? nlohmann::json(e.plain->program.size()) : nlohmann::json(nullptr);
    j["canonical_prefix_program"] = e.prefix ? producer_json(*e.prefix) : nlohmann::json(nullptr);
    j["canonical_plain_program"] = e.plain ? producer_json(*e.plain) : nlohmann::json(nullptr);
    j["prefix_producers"] = e.witnesses.size();
    entries.push_back(std::move(j));
  }
  nlohmann::json doc = {
      {"machine", table.machine_version()},
      {"bounds", {{"L", table.bounds().L}, {"T", table.bounds().T}}},
      {"entries", std::move(entries)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace depthlab::aic
