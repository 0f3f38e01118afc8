#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "nodal/catalog.hpp"
#include "nodal/triples.hpp"

namespace nodal::cli {

namespace {

using json = nlohmann::json;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr uint32_t kDefaultSeed = 20240611;

struct Job {
  std::string command;
  std::string algebra;
  std::string window = "0:2:3";
  std::string field = "101";
  int truncate = 12;
  uint32_t seed = kDefaultSeed;
  std::string format = "text";
  std::string output;
  std::vector<std::string> inputs;
  std::string input_file;
  bool diagram = false;
  int max_letters = 6;
  int max_mult = 1;
  std::vector<int> lambdas{1};
};

Window parse_window(const std::string& text) {
  Window w;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> w.kmin >> c1 >> w.kmax >> c2 >> w.L) || c1 != ':' || c2 != ':' || !is.eof())
    throw ValidationError("window must read k_min:k_max:L, got '" + text + "'");
  if (w.kmin > w.kmax) throw ValidationError("window has k_min > k_max");
  if (w.L < 1) throw ValidationError("window needs L >= 1");
  return w;
}

uint32_t parse_field(const std::string& text) {
  if (text == "Q" || text == "q")
    throw ValidationError("field Q: the pipeline runs over prime fields only; pass a prime p");
  uint64_t p = 0;
  try {
    size_t used = 0;
    p = std::stoull(text, &used);
    if (used != text.size()) p = 0;
  } catch (const std::exception&) {
    p = 0;
  }
  if (p < 2 || p > (1u << 31) || !is_prime(p)) throw ValidationError("field must be a prime, got '" + text + "'");
  return static_cast<uint32_t>(p);
}

std::shared_ptr<const NodalAlgebra> load_algebra(const std::string& arg, int truncate) {
  std::string name = arg;
  int param = 1;
  if (auto colon = arg.find(':'); colon != std::string::npos) {
    name = arg.substr(0, colon);
    try {
      param = std::stoi(arg.substr(colon + 1));
    } catch (const std::exception&) {
      throw ValidationError("bad algebra parameter in '" + arg + "'");
    }
  }
  if (truncate < 2) throw ValidationError("--truncate must be at least 2");
  auto a = std::make_shared<const NodalAlgebra>(builtin(name, param, truncate));
  if (!a->has_tilde()) throw ValidationError("algebra '" + name + "' has no hereditary overring to glue over");
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits a file holding several serialized complexes at their header lines.
// Comment lines before a header belong to the document that follows.
std::vector<std::string> split_documents(const std::string& text, const std::string& header) {
  std::vector<std::string> docs;
  std::string pending;
  bool open = false;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string w;
    ls >> w;
    if (w == header) {
      docs.push_back(pending);
      pending.clear();
      open = true;
    }
    if (open && w.rfind("#", 0) != 0 && w != header) {
      docs.back() += pending;
      pending.clear();
    }
    if (!open || w.rfind("#", 0) == 0)
      pending += line + "\n";
    else
      docs.back() += line + "\n";
  }
  if (docs.empty() && !pending.empty()) docs.push_back(pending);
  else if (!docs.empty()) docs.back() += pending;
  return docs;
}

std::string check_json_key(bool b) { return b ? "true" : "false"; }

struct Context {
  Job job;
  std::shared_ptr<const NodalAlgebra> alg;
  std::shared_ptr<const Bunch> bunch;
};

std::shared_ptr<const NodalAlgebra> algebra_for(Context& ctx, const std::string& text) {
  std::string name = ctx.job.algebra;
  if (name.empty()) name = complex_algebra_name(text);
  if (name.empty()) name = "dihedral";
  return load_algebra(name, ctx.job.truncate);
}

int cmd_build(Context& ctx, std::ostream& out, std::ostream& err) {
  std::vector<std::string> data = ctx.job.inputs;
  if (!ctx.job.input_file.empty()) {
    std::istringstream is(read_file(ctx.job.input_file));
    std::string line;
    while (std::getline(is, line)) {
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      data.push_back(line);
    }
  }
  if (data.empty()) throw ValidationError("build needs a datum (argument or --input file)");
  int code = kOk;
  json arr = json::array();
  for (size_t i = 0; i < data.size(); ++i) {
    Datum d;
    try {
      d = parse_datum(data[i]);
    } catch (const std::exception& e) {
      err << "datum " << i + 1 << ": " << e.what() << "\n";
      code = kValidation;
      continue;
    }
    if (auto problems = validate_datum(*ctx.bunch, d); !problems.empty()) {
      for (auto& p : problems) err << "datum " << i + 1 << ": " << p << "\n";
      code = kValidation;
      continue;
    }
    GluingDiagram g;
    ProjComplex c;
    try {
      g = glue(ctx.alg, ctx.bunch, d);
      c = complex_from_diagram(g);
    } catch (const std::invalid_argument& e) {
      err << "datum " << i + 1 << ": " << e.what() << "\n";
      code = kValidation;
      continue;
    }
    CheckReport rep = check(c);
    if (!rep.is_complex) code = kValidation;
    for (auto& p : rep.problems) err << "datum " << i + 1 << ": " << p << "\n";
    std::string text = format_complex(c, ctx.alg->name);
    if (ctx.job.format == "json") {
      json j{{"datum", datum_str(d)},
             {"truncated", g.truncated},
             {"is_complex", rep.is_complex},
             {"is_minimal", rep.is_minimal},
             {"complex", text}};
      if (ctx.job.diagram) j["diagram"] = format_diagram(g);
      arr.push_back(j);
    } else {
      out << "# datum " << datum_str(d) << "\n";
      out << "# check complex=" << check_json_key(rep.is_complex) << " minimal=" << check_json_key(rep.is_minimal)
          << (g.truncated ? " truncated" : "") << "\n";
      if (ctx.job.diagram) {
        std::istringstream ds(format_diagram(g));
        std::string line;
        while (std::getline(ds, line)) out << "# " << line << "\n";
      }
      out << text;
    }
  }
  if (ctx.job.format == "json") out << arr.dump(2) << "\n";
  return code;
}

std::vector<ProjComplex> load_complexes(Context& ctx, const std::string& path) {
  std::string text = read_file(path);
  ctx.alg = algebra_for(ctx, text);
  std::vector<ProjComplex> out;
  for (auto& doc : split_documents(text, "complex")) {
    if (doc.find_first_not_of(" \t\n") == std::string::npos) continue;
    out.push_back(parse_complex(doc, ctx.alg->A));
  }
  if (out.empty()) throw ValidationError("no complex in '" + path + "'");
  return out;
}

std::string single_input(const Job& job) {
  if (!job.input_file.empty()) return job.input_file;
  if (job.inputs.size() != 1) throw ValidationError(job.command + " needs exactly one input file");
  return job.inputs.front();
}

int cmd_verify(Context& ctx, std::ostream& out, std::ostream& err) {
  auto cs = load_complexes(ctx, single_input(ctx.job));
  int code = kOk;
  json arr = json::array();
  for (size_t i = 0; i < cs.size(); ++i) {
    const ProjComplex& c = cs[i];
    CheckReport rep = check(c);
    std::string nondeg = "skipped";
    std::string why;
    if (rep.is_complex && rep.is_minimal) {
      try {
        Triple t = functor_F(ctx.alg, c);
        nondeg = check_nondegenerate(t, &why) ? "true" : "false";
      } catch (const std::exception& e) {
        nondeg = "failed";
        why = e.what();
      }
    }
    if (!rep.is_complex || nondeg == "false" || nondeg == "failed") code = kValidation;
    if (!rep.is_minimal) err << "complex " << i + 1 << ": warning: not minimal\n";
    for (auto& p : rep.problems) err << "complex " << i + 1 << ": " << p << "\n";
    if (!why.empty()) err << "complex " << i + 1 << ": " << why << "\n";
    if (ctx.job.format == "json") {
      arr.push_back({{"index", i + 1},
                     {"is_complex", rep.is_complex},
                     {"is_minimal", rep.is_minimal},
                     {"nondegenerate", nondeg},
                     {"problems", rep.problems}});
    } else {
      out << "complex " << i + 1 << ": d^2=0 " << check_json_key(rep.is_complex) << ", minimal "
          << check_json_key(rep.is_minimal) << ", nondegenerate " << nondeg << "\n";
    }
  }
  if (ctx.job.format == "json") out << arr.dump(2) << "\n";
  return code;
}

ProjComplex summed(const std::vector<ProjComplex>& cs) {
  ProjComplex c = cs.front();
  for (size_t i = 1; i < cs.size(); ++i) c = direct_sum(c, cs[i]);
  return c;
}

int cmd_triple(Context& ctx, std::ostream& out, std::ostream&) {
  ProjComplex c = summed(load_complexes(ctx, single_input(ctx.job)));
  ctx.bunch = std::make_shared<const Bunch>(nodal_bunch(config_from_nodal(*ctx.alg), parse_window(ctx.job.window)));
  Triple t = functor_F(ctx.alg, c);
  BunchRep r = triple_to_bunchrep(t, ctx.bunch);
  bool roundtrip = chain_isomorphic(functor_G(t), c, ctx.job.seed).isomorphic;
  if (ctx.job.format == "json") {
    out << json{{"triple", format_triple(t)}, {"rep", format_rep(r)}, {"roundtrip", roundtrip}}.dump(2) << "\n";
  } else {
    out << format_triple(t) << format_rep(r) << "# roundtrip " << check_json_key(roundtrip) << "\n";
  }
  return roundtrip ? kOk : kValidation;
}

int cmd_decompose(Context& ctx, std::ostream& out, std::ostream& err) {
  std::string path = single_input(ctx.job);
  std::string text = read_file(path);
  BunchRep r;
  std::istringstream is(text);
  std::string head;
  is >> head;
  if (head == "bunchrep") {
    std::string name;
    is >> name;
    if (ctx.job.algebra.empty()) ctx.job.algebra = name;
    ctx.alg = load_algebra(ctx.job.algebra, ctx.job.truncate);
    ctx.bunch = std::make_shared<const Bunch>(nodal_bunch(config_from_nodal(*ctx.alg), parse_window(ctx.job.window)));
    r = parse_rep(text, ctx.bunch);
  } else {
    ProjComplex c = summed(load_complexes(ctx, path));
    ctx.bunch = std::make_shared<const Bunch>(nodal_bunch(config_from_nodal(*ctx.alg), parse_window(ctx.job.window)));
    r = triple_to_bunchrep(functor_F(ctx.alg, c), ctx.bunch);
  }
  int code = kOk;
  json arr = json::array();
  for (const BunchRep& s : decompose(r, ctx.job.seed)) {
    auto d = identify_datum(s, ctx.job.seed);
    if (!d) {
      err << "summand of dimension " << s.total_dim() << " not identified within the window\n";
      code = kValidation;
    }
    std::string text_d = d ? datum_str(*d) : "unidentified";
    if (ctx.job.format == "json")
      arr.push_back({{"datum", text_d}, {"dimension", s.total_dim()}});
    else
      out << text_d << "\n";
  }
  if (ctx.job.format == "json") out << arr.dump(2) << "\n";
  return code;
}

int cmd_catalog(Context& ctx, std::ostream& out, std::ostream&) {
  CatalogBounds cb;
  cb.max_letters = ctx.job.max_letters;
  cb.max_mult = ctx.job.max_mult;
  cb.lambdas.clear();
  for (int l : ctx.job.lambdas) {
    if (Fp(l).is_zero()) throw ValidationError("lambda must be nonzero");
    cb.lambdas.push_back(Fp(l));
  }
  auto entries = catalog(ctx.alg, ctx.bunch, cb);
  if (ctx.job.format == "json") {
    json arr = json::array();
    for (auto& e : entries) {
      const char* kind = e.kind == CatalogEntry::Kind::String ? "string"
                         : e.kind == CatalogEntry::Kind::Band ? "band"
                                                              : "exceptional";
      arr.push_back({{"kind", kind}, {"entry", entry_str(e)}});
    }
    out << arr.dump(2) << "\n";
  } else {
    for (auto& e : entries) out << entry_str(e) << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Job job;
  CLI::App app{"Derived-category computations over nodal algebras"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--algebra", job.algebra, "builtin algebra, name or name:param");
    sub->add_option("--window", job.window, "k_min:k_max:L");
    sub->add_option("--field", job.field, "prime p (Q is rejected)");
    sub->add_option("--truncate", job.truncate, "radical truncation of the path algebras");
    sub->add_option("--seed", job.seed, "seed for randomized isomorphism tests");
    sub->add_option("--format", job.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("-o,--output", job.output, "write results to this file");
  };
  auto* build = app.add_subcommand("build", "glue data into complexes of projectives");
  common(build);
  build->add_option("datum", job.inputs, "datum text");
  build->add_option("--input", job.input_file, "file with one datum per line");
  build->add_flag("--diagram", job.diagram, "also print the gluing diagram");
  auto* verify = app.add_subcommand("verify", "check d^2 = 0, minimality and non-degeneracy");
  common(verify);
  verify->add_option("file", job.inputs, "complex file");
  auto* triple = app.add_subcommand("triple", "triple and bunch representation of a complex");
  common(triple);
  triple->add_option("file", job.inputs, "complex file");
  auto* dec = app.add_subcommand("decompose", "indecomposable summands as data");
  common(dec);
  dec->add_option("file", job.inputs, "complex or bunchrep file");
  auto* cat = app.add_subcommand("catalog", "enumerate data of a window up to equivalence");
  common(cat);
  cat->add_option("--max-letters", job.max_letters, "longest word")->check(CLI::PositiveNumber);
  cat->add_option("--max-mult", job.max_mult, "largest band or bispecial multiplicity")->check(CLI::PositiveNumber);
  cat->add_option("--lambda", job.lambdas, "band parameters to list");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kValidation;
  }
  for (auto* sub : app.get_subcommands()) job.command = sub->get_name();

  std::ofstream file;
  std::ostream* sink = &out;
  if (!job.output.empty()) {
    file.open(job.output);
    if (!file) {
      err << "cannot write '" << job.output << "'\n";
      return kValidation;
    }
    sink = &file;
  }
  try {
    CharacteristicGuard guard(parse_field(job.field));
    Context ctx{job, nullptr, nullptr};
    if (job.command == "build" || job.command == "catalog") {
      Window w = parse_window(job.window);
      ctx.alg = load_algebra(job.algebra.empty() ? "dihedral" : job.algebra, job.truncate);
      ctx.bunch = std::make_shared<const Bunch>(nodal_bunch(config_from_nodal(*ctx.alg), w));
      return job.command == "build" ? cmd_build(ctx, *sink, err) : cmd_catalog(ctx, *sink, err);
    }
    if (job.command == "verify") return cmd_verify(ctx, *sink, err);
    if (job.command == "triple") return cmd_triple(ctx, *sink, err);
    return cmd_decompose(ctx, *sink, err);
  } catch (const DeskScaleLimit& e) {
    err << "desk-scale limit: " << e.what() << "\n";
    return kDeskScale;
  } catch (const std::exception& e) {
    err << job.command << ": " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace nodal::cli
