#include "depthlab/aic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "depthlab/error.hpp"
#include "parallel.hpp"

namespace depthlab::aic {

namespace {

using detail::parallel_for;
using detail::resolve_workers;

struct Record {
  Word program;
  Word output;
  std::uint64_t steps;
};

struct PlainHit {
  std::uint64_t rank;
  std::uint64_t steps;
};

using PlainMap = std::unordered_map<Word, PlainHit>;

constexpr std::uint32_t kMaxL = 62;
constexpr std::uint32_t kFrontierDepth = 10;

void check_bounds(const Bounds& b) {
  if (b.L < 1 || b.T < 1) throw PreconditionError("bounds need L >= 1 and T >= 1");
  if (b.L > kMaxL) throw PreconditionError("L above 62 is not supported");
}

// Visits the subtree of prefix programs below p. Only starved nodes have
// children: a program that halts, faults or exhausts its budget behaves the
// same on every extension.
void dfs(Word& p, const Bounds& b, std::vector<Record>& out) {
  machine::ExecOutcome o = machine::run_prefix(p, b.T);
  if (o.halted) {
    out.push_back({p, std::move(o.output), o.steps});
    return;
  }
  if (o.status != machine::RunStatus::Starved || p.size() >= b.L) return;
  for (unsigned bit = 0; bit < 2; ++bit) {
    p.push_back(bit);
    dfs(p, b, out);
    p.pop_back();
  }
}

std::vector<Record> enumerate_prefix(const Bounds& b, unsigned workers) {
  std::vector<Record> records;
  if (workers <= 1) {
    Word root;
    dfs(root, b, records);
    return records;
  }
  // Breadth-first down to the frontier depth, then hand subtrees to workers.
  const std::uint32_t depth = std::min(b.L, kFrontierDepth);
  std::vector<Word> level{Word()};
  for (std::uint32_t d = 0; d < depth; ++d) {
    std::vector<Word> next;
    for (const Word& p : level) {
      machine::ExecOutcome o = machine::run_prefix(p, b.T);
      if (o.halted) {
        records.push_back({p, std::move(o.output), o.steps});
        continue;
      }
      if (o.status != machine::RunStatus::Starved) continue;
      for (unsigned bit = 0; bit < 2; ++bit) {
        Word c = p;
        c.push_back(bit);
        next.push_back(std::move(c));
      }
    }
    level = std::move(next);
  }
  std::vector<std::vector<Record>> local(workers);
  parallel_for(level.size(), workers, [&](unsigned w, std::size_t i) {
    Word p = level[i];
    dfs(p, b, local[w]);
  });
  for (auto& part : local) {
    records.insert(records.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }
  return records;
}

void merge_plain(PlainMap& into, PlainMap&& from) {
  for (auto& [out, hit] : from) {
    auto [it, inserted] = into.try_emplace(out, hit);
    if (!inserted && hit.rank < it->second.rank) it->second = hit;
  }
}

PlainMap enumerate_plain(const Bounds& b, unsigned workers) {
  const std::uint64_t total = (std::uint64_t{1} << (b.L + 1)) - 1;
  const std::uint64_t chunk = std::uint64_t{1} << 12;
  const std::size_t chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
  std::vector<PlainMap> local(std::max(1u, workers));
  parallel_for(chunks, workers, [&](unsigned w, std::size_t c) {
    PlainMap& m = local[w];
    const std::uint64_t end = std::min(total, (c + 1) * chunk);
    for (std::uint64_t k = c * chunk; k < end; ++k) {
      machine::ExecOutcome o = machine::run_plain(bitstrings::lex_string(k), b.T);
      if (!o.halted) continue;
      auto [it, inserted] = m.try_emplace(std::move(o.output), PlainHit{k, o.steps});
      if (!inserted && k < it->second.rank) it->second = PlainHit{k, o.steps};
    }
  });
  PlainMap merged;
  for (auto& m : local) merge_plain(merged, std::move(m));
  return merged;
}

ComplexityTable assemble_table(const Bounds& b, std::vector<Record>& records,
                               const PlainMap& plain) {
  bitstrings::ShortlexLess less;
  std::sort(records.begin(), records.end(),
            [&](const Record& x, const Record& y) { return less(x.program, y.program); });
  ComplexityTable::Map entries;
  for (Record& r : records) {
    Entry& e = entries[r.output];
    Producer p{std::move(r.program), r.steps};
    if (!e.prefix) e.prefix = p;
    e.witnesses.push_back(std::move(p));
  }
  for (const auto& [out, hit] : plain) {
    entries[out].plain = Producer{bitstrings::lex_string(hit.rank), hit.steps};
  }
  return ComplexityTable(b, machine::machine_spec().version, std::move(entries));
}

}  // namespace

const Entry* ComplexityTable::find(const Word& x) const {
  auto it = entries_.find(x);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::uint64_t> ComplexityTable::I_bound(const Word& x) const {
  const Entry* e = find(x);
  if (!e || !e->prefix) return std::nullopt;
  return e->prefix->program.size();
}

std::optional<std::uint64_t> ComplexityTable::K_bound(const Word& x) const {
  const Entry* e = find(x);
  if (!e || !e->plain) return std::nullopt;
  return e->plain->program.size();
}

double enumeration_cost(const Bounds& bounds) {
  return std::ldexp(static_cast<double>(bounds.T), static_cast<int>(bounds.L) + 1);
}

double default_work_ceiling() {
  if (const char* env = std::getenv("DEPTHLAB_WORK_CEILING")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::ldexp(1.0, 31);
}

ComplexityTable enumerate(const Bounds& bounds, const EnumerateOptions& options) {
  check_bounds(bounds);
  const double ceiling = options.work_ceiling > 0 ? options.work_ceiling : default_work_ceiling();
  const double cost = enumeration_cost(bounds);
  if (cost > ceiling) throw WorkCeilingExceeded(cost, ceiling);
  const unsigned workers = resolve_workers(options.workers);
  std::vector<Record> records = enumerate_prefix(bounds, workers);
  const PlainMap plain = enumerate_plain(bounds, workers);
  return assemble_table(bounds, records, plain);
}

ComplexityTable enumerate_brute_force(const Bounds& bounds) {
  check_bounds(bounds);
  ComplexityTable::Map entries;
  const std::uint64_t total = (std::uint64_t{1} << (bounds.L + 1)) - 1;
  for (std::uint64_t k = 0; k < total; ++k) {
    const Word p = bitstrings::lex_string(k);
    machine::ExecOutcome o = machine::run_prefix(p, bounds.T);
    if (o.halted && o.consumed == p.size()) {
      Entry& e = entries[o.output];
      if (!e.prefix) e.prefix = Producer{p, o.steps};
      e.witnesses.push_back(Producer{p, o.steps});
    }
    machine::ExecOutcome q = machine::run_plain(p, bounds.T);
    if (q.halted) {
      Entry& e = entries[q.output];
      if (!e.plain) e.plain = Producer{p, q.steps};
    }
  }
  return ComplexityTable(bounds, machine::machine_spec().version, std::move(entries));
}

std::optional<Word> canonical_program(const Word& x, const ComplexityTable& table) {
  const Entry* e = table.find(x);
  if (!e || !e->prefix) return std::nullopt;
  return e->prefix->program;
}

bool is_n_compressible(const Word& x, std::uint64_t n, const ComplexityTable& table) {
  const auto i = table.I_bound(x);
  if (!i) throw ComplexityUnknown("complexity unknown within bounds for \"" + x.str() + "\"");
  return x.size() >= n && *i <= x.size() - n;
}

std::uint64_t DepthValue::steps() const {
  if (!steps_) throw UndefinedDepth("depth is UNDEFINED within bounds");
  return *steps_;
}

DepthValue depth(const Word& x, std::uint64_t s, const ComplexityTable& table) {
  const Entry* e = table.find(x);
  if (!e || !e->prefix) {
    throw ComplexityUnknown("complexity unknown within bounds for \"" + x.str() + "\"");
  }
  const std::uint64_t L = table.bounds().L;
  std::optional<std::uint64_t> best;
  std::optional<Word> witness;
  std::uint64_t excluded = 0;
  for (const Producer& y : e->witnesses) {
    bool incompressible;
    if (const auto iy = table.I_bound(y.program)) {
      incompressible = !(y.program.size() >= s && *iy <= y.program.size() - s);
    } else if (y.program.size() <= L + s) {
      incompressible = true;
    } else {
      ++excluded;
      continue;
    }
    if (incompressible && (!best || y.steps < *best)) {
      best = y.steps;
      witness = y.program;
    }
  }
  if (!best) return DepthValue::undefined(excluded);
  return DepthValue::of(*best, std::move(*witness), excluded);
}

std::string to_string(DepthClass c) { return c == DepthClass::Deep ? "DEEP" : "SHALLOW"; }

DepthClass classify_depth(const Word& x, std::uint64_t s, std::uint64_t t,
                          const ComplexityTable& table) {
  return depth(x, s, table).steps() > t ? DepthClass::Deep : DepthClass::Shallow;
}

Distribution::Distribution(std::vector<Word> support, std::vector<mpq_class> probabilities)
    : support_(std::move(support)), probabilities_(std::move(probabilities)) {
  if (support_.empty() || support_.size() != probabilities_.size()) {
    throw PreconditionError("distribution needs one probability per support word");
  }
  mpq_class total = 0;
  for (auto& p : probabilities_) {
    p.canonicalize();
    if (p <= 0) throw PreconditionError("distribution probabilities must be positive");
    total += p;
  }
  if (total != 1) throw PreconditionError("distribution probabilities must sum to 1");
  std::vector<Word> sorted = support_;
  std::sort(sorted.begin(), sorted.end(), bitstrings::ShortlexLess{});
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("distribution support has a repeated word");
  }
}

Distribution Distribution::uniform(std::size_t length) {
  if (length >= 32) throw PreconditionError("uniform distribution limited to length < 32");
  const std::uint64_t count = std::uint64_t{1} << length;
  std::vector<Word> support;
  std::vector<mpq_class> probs;
  for (std::uint64_t k = count - 1; k < 2 * count - 1; ++k) {
    support.push_back(bitstrings::lex_string(k));
    probs.emplace_back(1, count);
  }
  return Distribution(std::move(support), std::move(probs));
}

Distribution Distribution::geometric(std::size_t max_length) {
  if (max_length >= 32) throw PreconditionError("geometric distribution limited to length < 32");
  std::vector<Word> support;
  std::vector<mpq_class> weights;
  mpq_class total = 0;
  for (std::size_t n = 0; n <= max_length; ++n) {
    mpz_class den = 1;
    den <<= 2 * n + 1;
    const mpq_class w(1, den);
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = count - 1; k < 2 * count - 1; ++k) {
      support.push_back(bitstrings::lex_string(k));
      weights.push_back(w);
      total += w;
    }
  }
  for (auto& w : weights) w /= total;
  return Distribution(std::move(support), std::move(weights));
}

Distribution Distribution::point_mass(const Word& x) {
  return Distribution({x}, {mpq_class(1)});
}

double shannon_entropy(const Distribution& p) {
  long double h = 0;
  for (const auto& q : p.probabilities()) {
    const long double v = q.get_d();
    h -= v * std::log2(v);
  }
  return static_cast<double>(h);
}

mpq_class avg_codeword_length(const Distribution& p, const ComplexityTable& table) {
  mpq_class total = 0;
  std::string missing;
  for (std::size_t i = 0; i < p.support().size(); ++i) {
    const auto len = table.I_bound(p.support()[i]);
    if (!len) {
      missing += (missing.empty() ? "" : ", ") + ("\"" + p.support()[i].str() + "\"");
      continue;
    }
    total += p.probabilities()[i] * mpq_class(static_cast<unsigned long>(*len));
  }
  if (!missing.empty()) {
    throw ComplexityUnknown("complexity unknown within bounds for " + missing);
  }
  total.canonicalize();
  return total;
}

double coding_gap(const Distribution& p, const ComplexityTable& table) {
  return avg_codeword_length(p, table).get_d() - shannon_entropy(p);
}

mpq_class kraft_sum(const ComplexityTable& table) {
  mpq_class total = 0;
  for (const auto& [out, e] : table.entries()) {
    if (!e.prefix) continue;
    mpz_class den = 1;
    den <<= e.prefix->program.size();
    total += mpq_class(1, den);
  }
  total.canonicalize();
  return total;
}

}  // namespace depthlab::aic
