// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sievemoments/sievemoments.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitScale = 3;

struct Failure {
  int code;
  std::string message;
};

using Cell = std::variant<std::string, double, long long, unsigned long long>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string cell_text(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto d = std::get_if<double>(&c)) return fmt12(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::to_string(std::get<unsigned long long>(c));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << "\r\n";
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& c = row[i];
      if (auto d = std::get_if<double>(&c)) {
        // 12 significant digits, like the CSV; NaN has no JSON number form
        if (std::isnan(*d))
          obj[t.columns[i]] = nullptr;
        else
          obj[t.columns[i]] = std::stod(fmt12(*d));
      } else if (auto s = std::get_if<std::string>(&c)) {
        obj[t.columns[i]] = *s;
      } else if (auto n = std::get_if<long long>(&c)) {
        obj[t.columns[i]] = *n;
      } else {
        obj[t.columns[i]] = std::get<unsigned long long>(c);
      }
    }
    arr.push_back(std::move(obj));
  }
  os << "[\n";
  for (std::size_t i = 0; i < arr.size(); ++i) os << "  " << arr[i].dump() << (i + 1 < arr.size() ? ",\n" : "\n");
  os << "]\n";
}

class Session {
 public:
  Session() {
    if (smo_context_create(&ctx_) != SMO_OK) throw Failure{kExitFailure, "cannot create library context"};
  }
  ~Session() { smo_context_destroy(ctx_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  smo_context* get() const { return ctx_; }

  void check(smo_status s) const {
    if (s == SMO_OK) return;
    const std::string msg = smo_last_error(ctx_);
    if (s == SMO_INVALID_ARGUMENT) throw Failure{kExitUsage, msg};
    if (s == SMO_SCALE) throw Failure{kExitScale, msg};
    throw Failure{kExitFailure, std::string(smo_status_name(s)) + ": " + msg};
  }

 private:
  smo_context* ctx_ = nullptr;
};

struct ValueHandle {
  smo_value* v = nullptr;
  ~ValueHandle() { smo_value_destroy(v); }
  std::string text() const { return smo_value_string(v); }
  double decimal() const { return smo_value_double(v); }
};

smo_weight parse_weight(const std::string& name, unsigned A) {
  if (name == "sharp") return {SMO_WEIGHT_SHARP, 0};
  if (name == "dyadic") return {SMO_WEIGHT_DYADIC, 0};
  if (name == "power") return {SMO_WEIGHT_POWER, A};
  throw Failure{kExitUsage, "unknown weight '" + name + "' (sharp, power, dyadic)"};
}

// A subcommand: its CLI11 app, named parameters that a sweep may override,
// and the function that appends one row per invocation.
struct Command {
  CLI::App* app = nullptr;
  std::vector<std::string> columns;
  std::map<std::string, std::function<void(const std::string&)>> params;
  // required options, checked after parsing so that a swept one need not be given
  std::vector<std::pair<std::string, CLI::Option*>> required;
  std::function<void(Session&, Table&)> run;
};

template <class T>
void add_param(Command& c, const std::string& name, T& var, const std::string& help, bool required = false) {
  auto* opt = c.app->add_option("--" + name, var, help);
  if (required) c.required.emplace_back(name, opt);
  c.params[name] = [&var, name](const std::string& text) {
    std::istringstream is(text);
    T v{};
    if (!(is >> v) || !is.eof()) throw Failure{kExitUsage, "bad value '" + text + "' for --" + name};
    var = v;
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moebius divisor sums, their moments, and the permutation, polynomial and character analogues"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may also follow the subcommand
  std::string format = "csv", out_path, sweep;
  unsigned threads = 1;
  if (const char* env = std::getenv("SIEVEMOMENTS_THREADS")) {
    try {
      threads = static_cast<unsigned>(std::stoul(env));
    } catch (...) {
      std::cerr << "ignoring SIEVEMOMENTS_THREADS=" << env << "\n";
    }
  }
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "Write the table to this file instead of stdout");
  app.add_option("--threads", threads, "Worker threads (default: $SIEVEMOMENTS_THREADS or 1)")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--sweep", sweep, "PARAM=v1,v2,...: one row per value");

  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    commands.push_back(std::make_unique<Command>());
    commands.back()->app = app.add_subcommand(name, help);
    return *commands.back();
  };

  // moment-int
  std::string weight = "sharp", algo = "direct";
  unsigned A = 1, k = 1, m = 1, n = 2, N = 2, h = 1, q = 2, lo = 0, hi = 0;
  double R = 10, lambda = 2, mreal = 8, tol = 1e-10;
  unsigned long long x = 1000000, samples = 1000000, seed = 1, cutoff = 100000, terms = 1000000;
  unsigned long long X = 20, Y = 2, Z = 3, W = 6;
  long long D = -4;
  {
    auto& c = make("moment-int", "Exact moment sum over k-tuples of divisors");
    c.app->add_option("--weight", weight, "sharp | power | dyadic");
    add_param(c, "A", A, "PowerSmooth exponent");
    add_param(c, "R", R, "Level", true);
    add_param(c, "k", k, "Moment order", true);
    c.app->add_option("--algo", algo, "direct | grouped");
    c.columns = {"weight", "A", "R", "k", "algo", "value", "decimal", "terms"};
    c.run = [&](Session& s, Table& t) {
      const auto w = parse_weight(weight, A);
      if (algo != "direct" && algo != "grouped") throw Failure{kExitUsage, "--algo must be direct or grouped"};
      ValueHandle v;
      uint64_t count = 0;
      s.check(smo_moment(s.get(), w, R, k, algo == "direct" ? SMO_ALGO_DIRECT : SMO_ALGO_GROUPED, &v.v, &count));
      t.rows.push_back({weight, (long long)(weight == "power" ? A : 0), R, (long long)k, algo, v.text(), v.decimal(),
                        (unsigned long long)count});
    };
  }
  bool no_reference = false, restricted = false;
  {
    auto& c = make("moment-empirical", "(1/x) sum_{n<=x} M_f(n;R)^k, optionally restricted by Omega(n;R)");
    c.app->add_option("--weight", weight, "sharp | power | dyadic");
    add_param(c, "A", A, "PowerSmooth exponent");
    add_param(c, "R", R, "Level", true);
    add_param(c, "k", k, "Moment order", true);
    add_param(c, "x", x, "Range n <= x", true);
    auto* olo = c.app->add_option("--omega-lo", lo, "Keep n with Omega(n;R) >= this");
    auto* ohi = c.app->add_option("--omega-hi", hi, "Keep n with Omega(n;R) <= this");
    c.app->add_flag("--no-reference", no_reference, "Skip the exact moment used for the envelope constant");
    c.columns = {"weight", "A", "R", "k", "x", "omega_lo", "omega_hi", "value", "reference", "envelope_constant"};
    c.run = [&, olo, ohi](Session& s, Table& t) {
      const auto w = parse_weight(weight, A);
      restricted = olo->count() > 0 || ohi->count() > 0;
      const long long a = weight == "power" ? A : 0;
      if (restricted) {
        const unsigned top = ohi->count() ? hi : 0xFFFFFFFFu;
        double v = 0;
        s.check(smo_restricted_moment(s.get(), w, R, k, x, lo, top, &v));
        t.rows.push_back({weight, a, R, (long long)k, (unsigned long long)x, (long long)lo,
                          ohi->count() ? Cell((long long)hi) : Cell(std::string("inf")), v, NAN, NAN});
      } else {
        smo_empirical e{};
        s.check(smo_empirical_moment(s.get(), w, R, k, x, no_reference ? 0 : 1, &e));
        t.rows.push_back({weight, a, R, (long long)k, (unsigned long long)x, 0LL, std::string("inf"), e.value,
                          e.reference, e.envelope_constant});
      }
    };
  }
  std::string kernel = "binomial", perm_mode = "moment";
  {
    auto& c = make("perm", "Perm(N,m;k) over S_N, or the no-short-cycle density");
    add_param(c, "N", N, "Degree of the symmetric group", true);
    add_param(c, "m", m, "Fixed-set size / cycle bound", true);
    add_param(c, "k", k, "Half the moment order");
    c.app->add_option("--kernel", kernel, "binomial | plain")->check(CLI::IsMember({"binomial", "plain"}));
    c.app->add_option("--mode", perm_mode, "moment | short-cycles")->check(CLI::IsMember({"moment", "short-cycles"}));
    c.columns = {"N", "m", "k", "mode", "value", "decimal", "limit", "constant"};
    c.run = [&](Session& s, Table& t) {
      s.check(smo_set_kernel(s.get(), kernel == "plain" ? SMO_KERNEL_PLAIN : SMO_KERNEL_BINOMIAL));
      ValueHandle v;
      if (perm_mode == "moment") {
        s.check(smo_perm_moment(s.get(), N, m, k, &v.v));
        t.rows.push_back({(long long)N, (long long)m, (long long)k, perm_mode, v.text(), v.decimal(), NAN, NAN});
      } else {
        double limit = 0, constant = 0;
        s.check(smo_short_cycle_density(s.get(), N, m, &v.v, &limit, &constant));
        t.rows.push_back({(long long)N, (long long)m, (long long)k, perm_mode, v.text(), v.decimal(), limit, constant});
      }
    };
  }
  {
    auto& c = make("cmk", "Lattice count c(m,k)");
    add_param(c, "m", m, "Coordinate sum", true);
    add_param(c, "k", k, "Half the number of coordinates", true);
    c.columns = {"m", "k", "value", "decimal"};
    c.run = [&](Session& s, Table& t) {
      ValueHandle v;
      s.check(smo_c_count(s.get(), m, k, &v.v));
      t.rows.push_back({(long long)m, (long long)k, v.text(), v.decimal()});
    };
  }
  {
    auto& c = make("poisson", "E[M(X;m)^{2k}] for independent X_j ~ Poisson(1/j)");
    add_param(c, "m", m, "Fixed-set size", true);
    add_param(c, "k", k, "Half the moment order", true);
    add_param(c, "tol", tol, "Truncation tolerance (>= 1e-10)");
    c.app->add_option("--kernel", kernel, "binomial | plain")->check(CLI::IsMember({"binomial", "plain"}));
    c.columns = {"m", "k", "value", "tail_bound"};
    c.run = [&](Session& s, Table& t) {
      s.check(smo_set_kernel(s.get(), kernel == "plain" ? SMO_KERNEL_PLAIN : SMO_KERNEL_BINOMIAL));
      double v = 0, tail = 0;
      s.check(smo_poisson_moment(s.get(), m, k, tol, &v, &tail));
      t.rows.push_back({(long long)m, (long long)k, v, tail});
    };
  }
  std::string poly_algo = "brute";
  {
    auto& c = make("poly", "Poly_q(n,m,h;k) by enumeration, or its stable value by the cycle formula");
    c.app->set_help_flag("--help", "Print this help message and exit");  // frees -h for the window width
    add_param(c, "q", q, "Prime field size", true);
    add_param(c, "n", n, "Degree of N (brute force)");
    add_param(c, "m", m, "Divisor degree", true);
    add_param(c, "k", k, "Half the moment order", true);
    add_param(c, "h", h, "Window width: degrees in (m-h, m]");
    c.app->add_option("--algo", poly_algo, "brute | cycle")->check(CLI::IsMember({"brute", "cycle"}));
    c.columns = {"q", "n", "m", "k", "h", "algo", "value", "decimal"};
    c.run = [&](Session& s, Table& t) {
      ValueHandle v;
      if (poly_algo == "brute")
        s.check(smo_poly_bruteforce(s.get(), q, n, m, k, h, &v.v));
      else
        s.check(smo_poly_cycleformula(s.get(), q, m, k, &v.v));
      t.rows.push_back({(long long)q, poly_algo == "brute" ? Cell((long long)n) : Cell(std::string("stable")),
                        (long long)m, (long long)k, (long long)h, poly_algo, v.text(), v.decimal()});
    };
  }
  {
    auto& c = make("combprop", "Scan subspaces containing s_[2k]: exhaustive for k<=2, sampled for k=3");
    add_param(c, "k", k, "Half the dimension", true);
    add_param(c, "samples", samples, "Random generating sets (k=3)");
    add_param(c, "seed", seed, "Sampling seed");
    c.columns = {"k", "mode", "distinct", "violations_a", "violations_b", "violations_c", "equality_count",
                 "equality_expected", "equality_matches"};
    c.run = [&](Session& s, Table& t) {
      smo_combprop_report r{};
      s.check(smo_combprop(s.get(), k, samples, seed, &r));
      t.rows.push_back({(long long)k, std::string(r.exhaustive ? "exhaustive" : "sampled"),
                        (unsigned long long)r.distinct, (unsigned long long)r.violations_a,
                        (unsigned long long)r.violations_b, (unsigned long long)r.violations_c,
                        (unsigned long long)r.equality_count, (unsigned long long)r.equality_expected,
                        std::string(r.equality_matches ? "yes" : "no")});
    };
  }
  {
    auto& c = make("mlambda", "M(lambda) = 2^lambda int_0^1 |sin(pi t)|^lambda dt");
    add_param(c, "lambda", lambda, "Exponent >= 0", true);
    c.columns = {"lambda", "value"};
    c.run = [&](Session& s, Table& t) {
      double v = 0;
      s.check(smo_m_lambda(s.get(), lambda, &v));
      t.rows.push_back({lambda, v});
    };
  }
  std::string char_algo = "direct";
  {
    auto& c = make("char-moment", "sum over d_i in (R/2,R] of prod chi(d_i) / lcm");
    add_param(c, "D", D, "Fundamental discriminant", true);
    add_param(c, "R", R, "Level", true);
    add_param(c, "k", k, "Half the moment order", true);
    c.app->add_option("--algo", char_algo, "direct | local")->check(CLI::IsMember({"direct", "local"}));
    c.columns = {"D", "R", "k", "algo", "value", "decimal"};
    c.run = [&](Session& s, Table& t) {
      ValueHandle v;
      s.check(smo_char_moment(s.get(), D, R, k, char_algo == "direct" ? SMO_CHAR_DIRECT : SMO_CHAR_LOCAL_FACTORS,
                              &v.v));
      t.rows.push_back({D, R, (long long)k, char_algo, v.text(), v.decimal()});
    };
  }
  {
    auto& c = make("vk-volume", "Monte Carlo volume V_k(m)");
    add_param(c, "k", k, "1 or 2", true);
    add_param(c, "m", mreal, "Scale m >= 1", true);
    add_param(c, "samples", samples, "Sample count (>= 1e5)");
    add_param(c, "seed", seed, "Seed");
    c.columns = {"k", "m", "samples", "seed", "mean", "stderr", "hits"};
    c.run = [&](Session& s, Table& t) {
      smo_volume v{};
      s.check(smo_vk_volume(s.get(), k, mreal, samples, seed, &v));
      t.rows.push_back({(long long)k, mreal, (unsigned long long)v.samples, (unsigned long long)v.seed, v.mean,
                        v.stderr_, (unsigned long long)v.hits});
    };
  }
  {
    auto& c = make("singular-series", "Euler product of the local factors f_p");
    add_param(c, "D", D, "Fundamental discriminant", true);
    add_param(c, "k", k, "Half the moment order", true);
    add_param(c, "cutoff", cutoff, "Prime cutoff (>= |D|)");
    c.columns = {"D", "k", "cutoff", "value", "truncated_product", "tail_bound", "l_one", "ratio_to_l_power"};
    c.run = [&](Session& s, Table& t) {
      smo_singular v{};
      s.check(smo_singular_series(s.get(), D, k, cutoff, &v));
      t.rows.push_back({D, (long long)k, (unsigned long long)cutoff, v.value, v.truncated_product, v.tail_bound,
                        v.l_one, v.ratio_to_l_power});
    };
  }
  {
    auto& c = make("l-one", "Partial sum of chi(n)/n with its tail bound");
    add_param(c, "D", D, "Fundamental discriminant", true);
    add_param(c, "terms", terms, "Number of terms (>= |D|)");
    c.columns = {"D", "terms", "value", "bound"};
    c.run = [&](Session& s, Table& t) {
      double v = 0, b = 0;
      s.check(smo_l_one(s.get(), D, terms, &v, &b));
      t.rows.push_back({D, (unsigned long long)terms, v, b});
    };
  }
  {
    auto& c = make("support", "#{n <= x : sum_{d|n, d<=R} mu(d) != 0}");
    add_param(c, "R", R, "Level", true);
    add_param(c, "x", x, "Range", true);
    c.columns = {"R", "x", "count", "density"};
    c.run = [&](Session& s, Table& t) {
      uint64_t cnt = 0;
      s.check(smo_support_count(s.get(), R, x, &cnt));
      t.rows.push_back({R, (unsigned long long)x, (unsigned long long)cnt, double(cnt) / double(x)});
    };
  }
  {
    auto& c = make("hcount", "H(X,Y;Z,W)");
    add_param(c, "X", X, "Range", true);
    add_param(c, "Y", Y, "Smallest prime factor must exceed Y", true);
    add_param(c, "Z", Z, "Divisor window lower end (exclusive)", true);
    add_param(c, "W", W, "Divisor window upper end", true);
    c.columns = {"X", "Y", "Z", "W", "count"};
    c.run = [&](Session& s, Table& t) {
      uint64_t cnt = 0;
      s.check(smo_h_count(s.get(), X, Y, Z, W, &cnt));
      t.rows.push_back({(unsigned long long)X, (unsigned long long)Y, (unsigned long long)Z,
                        (unsigned long long)W, (unsigned long long)cnt});
    };
  }
  std::string suite = "quick";
  std::vector<int> only;
  bool mutate = false;
  bool verify_failed = false;
  {
    auto& c = make("verify", "Run the acceptance battery");
    c.app->add_option("--suite", suite, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    c.app->add_option("--only", only, "Criterion ids to run")->delimiter(',');
    c.app->add_flag("--mutate-kernel", mutate, "Use the kernel without binomials (the permutation checks should fail)");
    c.columns = {"id", "criterion", "status", "seconds", "detail"};
    c.run = [&](Session& s, Table& t) {
      if (mutate) s.check(smo_set_kernel(s.get(), SMO_KERNEL_PLAIN));
      int ok = 0;
      s.check(smo_verify(
          s.get(), suite == "full", only.empty() ? nullptr : only.data(), only.size(),
          [](const smo_check* chk, void* user) {
            auto* tab = static_cast<Table*>(user);
            const char* status = chk->soft ? (chk->passed ? "report" : "report-off-trend") : (chk->passed ? "pass" : "FAIL");
            std::cerr << "[" << status << "] " << chk->id << " " << chk->name << " (" << fmt12(chk->seconds) << " s)\n";
            tab->rows.push_back({(long long)chk->id, std::string(chk->name), std::string(status), chk->seconds,
                                 std::string(chk->detail)});
          },
          &t, &ok));
      verify_failed = verify_failed || !ok;
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  Command* cmd = nullptr;
  for (auto& c : commands)
    if (c->app->parsed()) cmd = c.get();
  if (!cmd) {
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    Session session;
    session.check(smo_set_threads(session.get(), threads));
    const std::string swept = sweep.substr(0, sweep.find('='));
    for (const auto& [name, opt] : cmd->required)
      if (opt->count() == 0 && name != swept) throw Failure{kExitUsage, "--" + name + " is required"};
    Table table;
    table.columns = cmd->columns;
    if (sweep.empty()) {
      cmd->run(session, table);
    } else {
      const auto eq = sweep.find('=');
      if (eq == std::string::npos) throw Failure{kExitUsage, "--sweep expects PARAM=v1,v2,..."};
      const std::string name = sweep.substr(0, eq);
      const auto it = cmd->params.find(name);
      if (it == cmd->params.end()) throw Failure{kExitUsage, "cannot sweep '" + name + "' for this subcommand"};
      std::stringstream values(sweep.substr(eq + 1));
      std::string v;
      std::vector<std::string> grid;
      while (std::getline(values, v, ',')) grid.push_back(v);
      if (grid.empty()) throw Failure{kExitUsage, "--sweep needs at least one value"};
      for (const auto& g : grid) {
        it->second(g);
        cmd->run(session, table);
      }
    }
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary);
      if (!file) throw Failure{kExitFailure, "cannot open " + out_path};
      os = &file;
    }
    if (format == "json")
      write_json(*os, table);
    else
      write_csv(*os, table);
    return verify_failed ? kExitFailure : kExitOk;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
}
