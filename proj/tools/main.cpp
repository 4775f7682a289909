#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbsll/document.hpp"
#include "dbsll/lpdomodel.hpp"
#include "dbsll/promotion.hpp"
#include "dbsll/relmodel.hpp"
#include "dbsll/rewrite.hpp"

namespace {

// exit codes: 0 success, 1 parse error, 2 proof check failure,
// 3 step budget exhausted, 4 backend constraint, 5 invariance / law failure
constexpr int kOk = 0;
constexpr int kParse = 1;
constexpr int kCheck = 2;
constexpr int kBudget = 3;
constexpr int kBackend = 4;
constexpr int kInvariance = 5;

struct Options {
  std::string input;
  std::string mode;
  std::string monoid;
  std::string backend = "rel";
  std::string assignment;
  bool trace = false;
  bool enable_promotion = false;
  bool mult = false;
  std::uint64_t seed = 0;
  std::size_t budget = 1'000'000;
  std::size_t size_a = 2, size_b = 2, bound = 2;
  std::vector<std::string> grades;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw dbsll::ParseError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_diag(const dbsll::Diag& d) {
  std::string path;
  for (std::size_t k : d.path) {
    if (!path.empty()) path += ".";
    path += std::to_string(k);
  }
  if (path.empty()) path = "root";
  return path + ": " + d.code + ": " + d.message;
}

void check_expectations(const Options& opt, const dbsll::SExpr& doc) {
  if (!opt.monoid.empty() && opt.monoid != dbsll::document_field(doc, "monoid"))
    throw dbsll::ParseError("document monoid does not match --monoid");
  if (!opt.mode.empty() && opt.mode != dbsll::document_field(doc, "mode"))
    throw dbsll::ParseError("document mode does not match --mode");
}

dbsll::rel::Assignment parse_assignment(const std::string& s) {
  dbsll::rel::Assignment asg;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string item = s.substr(pos, comma - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw dbsll::ParseError("bad assignment entry (want name=size): " + item);
    asg.atom_sizes[item.substr(0, eq)] =
        static_cast<std::size_t>(std::stoull(item.substr(eq + 1)));
    pos = comma + 1;
  }
  return asg;
}

template <dbsll::GradeMonoid G>
dbsll::PromCutHook<G> hook_for(const Options& opt) {
  if (!opt.enable_promotion) return {};
  if constexpr (dbsll::GradeSemiring<G>)
    return dbsll::promotion_hook<G>();
  else
    throw dbsll::NotSupported("promotion needs a grade semiring");
}

template <dbsll::GradeMonoid G>
int cmd_check(const Options& opt, const dbsll::SExpr& doc) {
  auto d = dbsll::parse_document<G>(doc);
  auto report = dbsll::check<G>(d.proof, d.mode);
  for (const auto& diag : report.errors) std::cerr << format_diag(diag) << "\n";
  if (!report.ok()) return kCheck;
  std::cout << "ok " << dbsll::to_string<G>(d.proof->conclusion) << "\n";
  return kOk;
}

template <dbsll::GradeMonoid G>
int cmd_normalize(const Options& opt, const dbsll::SExpr& doc) {
  auto d = dbsll::parse_document<G>(doc);
  dbsll::NormalizeOptions nopts;
  nopts.budget = opt.budget;
  auto res = dbsll::normalize<G>(d.proof, d.mode, nopts, hook_for<G>(opt));
  if (opt.trace) {
    for (const auto& e : res.trace) {
      std::string path;
      for (std::size_t k : e.path) {
        if (!path.empty()) path += ".";
        path += std::to_string(k);
      }
      if (path.empty()) path = "root";
      std::cerr << "step " << e.step << " " << e.rewrite << " @" << path << "\n";
    }
  }
  std::cout << dbsll::print_document<G>({d.mode, res.tree}) << "\n";
  return kOk;
}

int cmd_eval_rel(const Options& opt, const dbsll::SExpr& doc) {
  auto d = dbsll::parse_document<dbsll::NatGrade>(doc);
  auto asg = parse_assignment(opt.assignment);
  auto den = dbsll::rel::interp_proof<dbsll::NatGrade>(d.proof, asg);
  std::cout << dbsll::to_string<dbsll::NatGrade>(d.proof->conclusion) << "\n";
  std::cout << den.tuples.size() << " tuples\n";
  for (const auto& t : den.tuples) {
    std::string line = "(";
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k) line += ", ";
      line += t[k]->key;
    }
    std::cout << line << ")\n";
  }
  return kOk;
}

int cmd_eval_lpdo(const dbsll::SExpr& doc) {
  auto d = dbsll::parse_document<dbsll::FactoredOp>(doc);
  auto env = dbsll::lpdosem::eval_proof(d.proof);
  for (std::size_t k = 0; k < env.size(); ++k)
    std::cout << k << ": "
              << dbsll::to_string<dbsll::FactoredOp>(d.proof->conclusion[k])
              << " = " << env[k].to_string() << "\n";
  return kOk;
}

int cmd_invariance_rel(const Options& opt, const dbsll::SExpr& doc) {
  auto d = dbsll::parse_document<dbsll::NatGrade>(doc);
  auto asg = parse_assignment(opt.assignment);
  auto before = dbsll::rel::interp_proof<dbsll::NatGrade>(d.proof, asg);
  dbsll::NormalizeOptions nopts;
  nopts.budget = opt.budget;
  auto res = dbsll::normalize<dbsll::NatGrade>(d.proof, d.mode, nopts,
                                               hook_for<dbsll::NatGrade>(opt));
  auto after = dbsll::rel::interp_proof<dbsll::NatGrade>(res.tree, asg);
  bool same = before == after;
  std::cout << "steps " << res.trace.size() << "\n";
  std::cout << "denotation " << (same ? "preserved" : "CHANGED") << " ("
            << before.tuples.size() << " tuples)\n";
  return same ? kOk : kInvariance;
}

int cmd_invariance_lpdo(const Options& opt, const dbsll::SExpr& doc) {
  // the operator model is checked law by law on generator grids; the
  // document is still normalized so the rewrite steps themselves run
  auto d = dbsll::parse_document<dbsll::FactoredOp>(doc);
  dbsll::NormalizeOptions nopts;
  nopts.budget = opt.budget;
  auto res = dbsll::normalize<dbsll::FactoredOp>(d.proof, d.mode, nopts,
                                                 hook_for<dbsll::FactoredOp>(opt));
  std::cout << "steps " << res.trace.size() << "\n";
  bool all = true;
  for (const auto& law : dbsll::lpdosem::check_laws()) {
    std::cout << law.name << ": " << (law.ok ? "ok" : "FAIL") << "\n";
    all = all && law.ok;
  }
  return all ? kOk : kInvariance;
}

int cmd_laws(const Options& opt) {
  bool all = true;
  if (opt.backend == "rel") {
    for (const auto& law :
         dbsll::rel::check_model_laws(opt.size_a, opt.size_b, opt.bound)) {
      std::cout << law.name << ": " << (law.ok ? "ok" : "FAIL") << "\n";
      all = all && law.ok;
    }
  } else if (opt.backend == "lpdo") {
    for (const auto& law : dbsll::lpdosem::check_laws()) {
      std::cout << law.name << ": " << (law.ok ? "ok" : "FAIL") << "\n";
      all = all && law.ok;
    }
  } else {
    throw dbsll::NotSupported("unknown backend: " + opt.backend);
  }
  return all ? kOk : kInvariance;
}

template <dbsll::GradeMonoid G>
G parse_raw_grade(const std::string& s) {
  return dbsll::GradeIO<G>::parse(s);
}

template <dbsll::GradeMonoid G>
int cmd_split(const Options& opt) {
  if (opt.grades.size() != 4)
    throw dbsll::ParseError("split takes exactly four grades");
  G a = parse_raw_grade<G>(opt.grades[0]);
  G b = parse_raw_grade<G>(opt.grades[1]);
  G c = parse_raw_grade<G>(opt.grades[2]);
  G d = parse_raw_grade<G>(opt.grades[3]);
  if (opt.mult) {
    if constexpr (dbsll::GradeSemiring<G>) {
      auto ms = G::mult_split(a, b, c, d);
      std::cout << "s_parts:";
      for (const auto& g : ms.s_parts) std::cout << " " << g.to_string();
      std::cout << "\nr_parts:";
      for (const auto& g : ms.r_parts) std::cout << " " << g.to_string();
      std::cout << "\nchosen:";
      for (auto [i, j] : ms.chosen) std::cout << " (" << i << "," << j << ")";
      std::cout << "\n";
      return kOk;
    } else {
      throw dbsll::NotSupported("multiplicative splitting needs a semiring");
    }
  }
  auto cert = G::additive_split(a, b, c, d);
  std::cout << "x13 = " << cert.x13.to_string() << "\n";
  std::cout << "x14 = " << cert.x14.to_string() << "\n";
  std::cout << "x23 = " << cert.x23.to_string() << "\n";
  std::cout << "x24 = " << cert.x24.to_string() << "\n";
  return kOk;
}

int dispatch(const std::string& command, const Options& opt) {
  if (command == "laws") return cmd_laws(opt);
  if (command == "split") {
    std::string monoid = opt.monoid.empty() ? "nat" : opt.monoid;
    if (monoid == "nat") return cmd_split<dbsll::NatGrade>(opt);
    if (monoid == "lpdo") return cmd_split<dbsll::FactoredOp>(opt);
    throw dbsll::ParseError("unknown monoid: " + monoid);
  }

  auto doc = dbsll::parse_sexpr(read_input(opt.input));
  check_expectations(opt, doc);
  std::string monoid = dbsll::document_field(doc, "monoid");

  if (command == "check") {
    if (monoid == "nat") return cmd_check<dbsll::NatGrade>(opt, doc);
    if (monoid == "lpdo") return cmd_check<dbsll::FactoredOp>(opt, doc);
    throw dbsll::ParseError("unknown monoid: " + monoid);
  }
  if (command == "normalize") {
    if (monoid == "nat") return cmd_normalize<dbsll::NatGrade>(opt, doc);
    if (monoid == "lpdo") return cmd_normalize<dbsll::FactoredOp>(opt, doc);
    throw dbsll::ParseError("unknown monoid: " + monoid);
  }
  if (command == "eval") {
    if (opt.backend == "rel") {
      if (monoid != "nat")
        throw dbsll::NotSupported("the rel backend needs the nat monoid");
      return cmd_eval_rel(opt, doc);
    }
    if (opt.backend == "lpdo") {
      if (monoid != "lpdo")
        throw dbsll::NotSupported("the lpdo backend needs the lpdo monoid");
      return cmd_eval_lpdo(doc);
    }
    throw dbsll::NotSupported("unknown backend: " + opt.backend);
  }
  if (command == "invariance") {
    if (opt.backend == "rel") {
      if (monoid != "nat")
        throw dbsll::NotSupported("the rel backend needs the nat monoid");
      return cmd_invariance_rel(opt, doc);
    }
    if (opt.backend == "lpdo") {
      if (monoid != "lpdo")
        throw dbsll::NotSupported("the lpdo backend needs the lpdo monoid");
      return cmd_invariance_lpdo(opt, doc);
    }
    throw dbsll::NotSupported("unknown backend: " + opt.backend);
  }
  throw dbsll::ParseError("unknown command: " + command);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded proof kernel, normalizer, and executable semantics"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  for (const char* name :
       {"check", "normalize", "eval", "invariance", "laws", "split"}) {
    auto* sub = app.add_subcommand(name);
    if (std::string(name) != "split" && std::string(name) != "laws")
      sub->add_option("input", opt.input, "input document ('-' for stdin)");
    sub->add_option("--mode", opt.mode, "expected calculus mode");
    sub->add_option("--monoid", opt.monoid, "expected / selected grade monoid");
    sub->add_option("--backend", opt.backend, "semantic backend: rel or lpdo");
    sub->add_option("--assignment", opt.assignment, "atom sizes, e.g. a=2,b=3");
    sub->add_option("--budget", opt.budget, "rewrite step budget");
    sub->add_option("--seed", opt.seed, "seed for randomized checks");
    sub->add_flag("--trace", opt.trace, "print rewrite steps to stderr");
    sub->add_flag("--enable-promotion", opt.enable_promotion,
                  "reduce cuts against promotions");
    if (std::string(name) == "laws") {
      sub->add_option("--size-a", opt.size_a, "first base set size");
      sub->add_option("--size-b", opt.size_b, "second base set size");
      sub->add_option("--bound", opt.bound, "bag weight bound");
    }
    if (std::string(name) == "split") {
      sub->add_flag("--mult", opt.mult, "multiplicative splitting (s r x y)");
      sub->add_option("grades", opt.grades, "four grades");
    }
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return dispatch(command, opt);
  } catch (const dbsll::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const dbsll::CheckError& e) {
    std::cerr << format_diag(e.diag) << "\n";
    return kCheck;
  } catch (const dbsll::StepBudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kBudget;
  } catch (const dbsll::NotSupported& e) {
    std::cerr << e.what() << "\n";
    return kBackend;
  } catch (const dbsll::PreconditionViolated& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  } catch (const dbsll::EngineInvariantViolated& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kCheck;
  }
}
