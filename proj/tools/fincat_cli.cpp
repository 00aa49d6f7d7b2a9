// Command line front end: parses the text formats, dispatches operations,
// runs law suites, and emits text or JSONL reports.
//
// Exit codes: 0 all laws pass, 1 law failure, 2 not converged, 3 input error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "fincat/parse.hpp"
#include "fincat/suite.hpp"

using namespace fincat;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

struct Options {
  std::uint64_t seed = 20240801;
  int bound = 8;
  int trials = 1000;
  std::string format = "text";
  std::string field = "rat";
};

void apply_env(Options& o, bool seed_set, bool bound_set) {
  if (!seed_set)
    if (const char* s = std::getenv("FINCAT_SEED")) o.seed = std::strtoull(s, nullptr, 10);
  if (!bound_set)
    if (const char* s = std::getenv("FINCAT_BOUND")) o.bound = std::atoi(s);
}

int emit(const SuiteReport& rep, const Options& o) {
  if (o.format == "jsonl")
    std::cout << rep.jsonl();
  else
    std::cout << rep.text();
  return rep.exit_code();
}

std::shared_ptr<const TruncatedFinSetSite> parse_trunc(const std::string& spec) {
  if (spec.rfind("trunc:", 0) != 0)
    throw input_error("site spec must be trunc:<N> (got '" + spec + "')");
  int n = std::atoi(spec.c_str() + 6);
  require(n >= 1 && n <= 6, "truncation bound out of range");
  return std::make_shared<TruncatedFinSetSite>(n);
}

TheoryPresentation make_theory(const std::string& spec, const std::string& site_spec) {
  auto base = parse_trunc(site_spec);
  if (spec == "degenerate") return degenerate_theory(base);
  if (spec == "pointed") return build_theory(base, pointed_set_family());
  if (spec == "semilattice") return build_theory(base, semilattice_family());
  if (spec.rfind("f", 0) == 0 && spec.size() > 1 && std::isdigit(spec[1])) {
    int q = std::atoi(spec.c_str() + 1);
    require(q >= 2, "field order must be at least 2");
    return build_theory(base, fq_module_family(q));
  }
  if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    // the site arrows are referenced by their generated names
    ParsedCategory site_names;
    site_names.cat = base->site.cat;
    for (int o = 0; o < base->site.cat->object_count; ++o)
      site_names.obj_by_name[base->site.cat->oname(o)] = o;
    for (int a = 0; a < base->site.cat->arrow_count(); ++a)
      site_names.arr_by_name[base->site.cat->aname(a)] = a;
    auto parsed = parse_theory(slurp(path), site_names);
    TheoryPresentation t;
    t.base = base;
    t.theory = parsed.theory.cat;
    t.tau.source = base->site.cat;
    t.tau.target = t.theory;
    t.tau.obj.resize(base->site.cat->object_count);
    for (int o = 0; o < base->site.cat->object_count; ++o) {
      // identity on objects: match by name, falling back to position
      auto it = parsed.theory.obj_by_name.find(base->site.cat->oname(o));
      t.tau.obj[o] = it != parsed.theory.obj_by_name.end() ? it->second : o;
    }
    t.tau.arr = parsed.tau_arr;
    t.name = path;
    return t;
  }
  throw input_error("unknown theory spec '" + spec + "'");
}

CommutativeTheory make_commutative(const std::string& spec, const std::string& site_spec) {
  auto base = parse_trunc(site_spec);
  if (spec == "degenerate") return commutative_theory(base, degenerate_family());
  if (spec == "semilattice") return commutative_theory(base, semilattice_family());
  if (spec == "pointed") return commutative_theory(base, pointed_set_family());
  if (spec.rfind("f", 0) == 0 && std::isdigit(spec[1]))
    return commutative_theory(base, fq_module_family(std::atoi(spec.c_str() + 1)));
  throw input_error("tensor routes need a built-in commutative theory (got '" + spec +
                    "')");
}

MonoidalFinCategory make_monoidal(const std::string& spec) {
  if (spec.rfind("cyclic:", 0) == 0) {
    int n = std::atoi(spec.c_str() + 7);
    require(n >= 1 && n <= 12, "cyclic order out of range");
    CategoryBuilder b;
    int o = b.add_object("*");
    for (int i = 0; i < n; ++i) b.add_arrow(o, o, "g" + std::to_string(i));
    b.set_identity(o, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b.set_composite(i, j, (i + j) % n);
    auto cat = b.build();
    return strict_monoidal(
        cat, [](int, int) { return 0; }, [n](int f, int g) { return (f + g) % n; }, 0);
  }
  if (spec.rfind("chain:", 0) == 0) {
    int n = std::atoi(spec.c_str() + 6);
    require(n >= 0 && n <= 6, "chain length out of range");
    CategoryBuilder b;
    for (int i = 0; i <= n; ++i) b.add_object(std::to_string(i));
    std::vector<std::vector<int>> arrow(n + 1, std::vector<int>(n + 1, -1));
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        arrow[i][j] = b.add_arrow(i, j, "le" + std::to_string(i) + "_" + std::to_string(j));
    for (int i = 0; i <= n; ++i) b.set_identity(i, arrow[i][i]);
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        for (int k = j; k <= n; ++k)
          b.set_composite(arrow[j][k], arrow[i][j], arrow[i][k]);
    auto cat = b.build();
    auto arr = [cat, arrow](int f, int g) {
      return arrow[std::min(cat->src(f), cat->src(g))]
                  [std::min(cat->tgt(f), cat->tgt(g))];
    };
    return strict_monoidal(
        cat, [](int a, int b2) { return std::min(a, b2); }, arr, n);
  }
  if (spec == "bool") {
    static auto fs = std::make_shared<FinSetCategory>(1);
    auto arr = [](int f, int g) {
      const FinSetCategory& s = *fs;
      const auto& ft = s.table_of(f);
      const auto& gt = s.table_of(g);
      const FinCategory& c = *s.category();
      int m = c.src(f), mp = c.src(g), np = c.tgt(g);
      std::vector<int> out(m * mp);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < mp; ++j) out[i * mp + j] = ft[i] * np + gt[j];
      return s.arrow_of(m * mp, c.tgt(f) * np, out);
    };
    return strict_monoidal(
        fs->category(), [](int a, int b) { return a * b; }, arr, 1);
  }
  throw input_error("unknown monoidal fixture '" + spec + "' (cyclic:n, chain:n, bool)");
}

Presheaf make_presheaf(const std::string& spec, CatPtr cat) {
  if (spec.rfind("y:", 0) == 0) {
    std::string name = spec.substr(2);
    for (int o = 0; o < cat->object_count; ++o)
      if (cat->oname(o) == name) return representable(cat, o).presheaf;
    throw input_error("no object named '" + name + "'");
  }
  if (spec.rfind("const:", 0) == 0)
    return constant_presheaf(cat, std::atoi(spec.c_str() + 6));
  ParsedCategory pc;
  pc.cat = cat;
  for (int o = 0; o < cat->object_count; ++o) pc.obj_by_name[cat->oname(o)] = o;
  for (int a = 0; a < cat->arrow_count(); ++a) pc.arr_by_name[cat->aname(a)] = a;
  auto parsed = parse_presheaf(slurp(spec), pc);
  auto rep = check_presheaf(parsed.presheaf);
  if (!rep.ok()) throw input_error("presheaf file violates functoriality: " +
                                   rep.violations[0].detail);
  return parsed.presheaf;
}

std::string describe_sizes(const Presheaf& p) {
  std::ostringstream o;
  o << "sizes";
  for (size_t i = 0; i < p.size.size(); ++i) o << " " << p.cat->oname(static_cast<int>(i))
                                               << ":" << p.size[i];
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite categories, theories, and kernel calculus"};
  app.require_subcommand(1);
  Options opt;
  bool seed_set = false, bound_set = false;
  app.add_option("--seed", opt.seed, "seed for randomized suites")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--bound", opt.bound, "reflection iteration bound")
      ->each([&](const std::string&) { bound_set = true; });
  app.add_option("--trials", opt.trials, "random trial count");
  app.add_option("--format", opt.format, "text | jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}));
  app.add_option("--field", opt.field, "q | rat (exact rational)");

  // --- cat ---
  auto* cat = app.add_subcommand("cat", "category operations");
  auto* cat_check = cat->add_subcommand("check", "validate the laws of a category file");
  std::string cat_input;
  cat_check->add_option("--input", cat_input, "category file")->required();

  // --- site ---
  auto* site = app.add_subcommand("site", "site operations");
  auto* site_check = site->add_subcommand("check", "validate a site file");
  std::string site_input;
  site_check->add_option("--input", site_input)->required();
  auto* site_show = site->add_subcommand("show", "print a built-in truncated site");
  std::string show_spec = "trunc:2";
  site_show->add_option("--site", show_spec);
  auto* site_sheafify = site->add_subcommand("sheafify", "reflect a presheaf into sheaves");
  std::string shf_site = "trunc:2", shf_presheaf;
  site_sheafify->add_option("--site", shf_site);
  site_sheafify->add_option("--presheaf", shf_presheaf, "presheaf file or const:n")
      ->required();

  // --- theory ---
  auto* theory = app.add_subcommand("theory", "theory operations");
  std::string th_spec = "f2", th_site = "trunc:2";
  theory->add_option("--theory", th_spec, "f<q> | pointed | semilattice | degenerate | file:path");
  theory->add_option("--site", th_site, "trunc:<N>");
  auto* th_validate = theory->add_subcommand("validate", "law report for a theory");
  auto* th_free = theory->add_subcommand("free", "free model on n generators");
  int th_gens = 1;
  th_free->add_option("--generators", th_gens)->required();
  auto* th_adj = theory->add_subcommand("adjunction-check", "free-forget adjunction suite");
  int th_max_points = 4;
  th_adj->add_option("--max-points", th_max_points);
  auto* th_tensor = theory->add_subcommand("tensor-models", "tensor two free models");
  int tm_left = 1, tm_right = 1;
  std::string tm_route = "both";
  th_tensor->add_option("--left", tm_left, "generators of the left model");
  th_tensor->add_option("--right", tm_right, "generators of the right model");
  th_tensor->add_option("--route", tm_route)->check(CLI::IsMember({"day", "congruence", "both"}));

  // --- day ---
  auto* day = app.add_subcommand("day", "day convolution on a monoidal fixture");
  std::string day_monoidal = "chain:2";
  day->add_option("--monoidal", day_monoidal, "cyclic:n | chain:n | bool");
  auto* day_tensor_cmd = day->add_subcommand("tensor", "day tensor of two presheaves");
  std::string day_left = "y:0", day_right = "y:1";
  day_tensor_cmd->add_option("--left", day_left);
  day_tensor_cmd->add_option("--right", day_right);
  auto* day_hom_cmd = day->add_subcommand("hom", "day internal hom");
  day_hom_cmd->add_option("--left", day_left);
  day_hom_cmd->add_option("--right", day_right);
  auto* day_laws_cmd = day->add_subcommand("laws", "unit/associativity/symmetry suite");

  // --- fib ---
  auto* fib = app.add_subcommand("fib", "fibered structure suites");
  auto* fib_bc = fib->add_subcommand("beck-chevalley", "comparison isos on pullback squares");
  int bc_max_base = 4, bc_max_dim = 3;
  fib_bc->add_option("--max-base", bc_max_base);
  fib_bc->add_option("--max-dim", bc_max_dim);
  auto* fib_proj = fib->add_subcommand("projection", "projection formula sweep");
  int pf_max_base = 3, pf_max_dim = 3;
  fib_proj->add_option("--max-base", pf_max_base);
  fib_proj->add_option("--max-dim", pf_max_dim);
  auto* fib_ab = fib->add_subcommand("alpha-beta", "Lawvere-Linton round trips");
  std::string ab_theory = "degenerate", ab_site = "trunc:2";
  int ab_base_size = 2;
  fib_ab->add_option("--theory", ab_theory);
  fib_ab->add_option("--site", ab_site);
  fib_ab->add_option("--base-size", ab_base_size);

  // --- kern ---
  auto* kern = app.add_subcommand("kern", "kernel calculus");
  std::string kern_input, kern_left, kern_right, kern_name;
  auto* kern_compose = kern->add_subcommand("compose", "compose two kernels from a file");
  kern_compose->add_option("--input", kern_input)->required();
  kern_compose->add_option("--left", kern_left)->required();
  kern_compose->add_option("--right", kern_right)->required();
  auto* kern_lift = kern->add_subcommand("lift", "cartesian lift of a kernel");
  kern_lift->add_option("--input", kern_input)->required();
  kern_lift->add_option("--kernel", kern_name)->required();
  auto* kern_tensor = kern->add_subcommand("tensor", "tensor two kernels");
  kern_tensor->add_option("--input", kern_input)->required();
  kern_tensor->add_option("--left", kern_left)->required();
  kern_tensor->add_option("--right", kern_right)->required();
  auto* kern_laws = kern->add_subcommand("laws", "kernel algebra law suite");

  // global flags may follow the verb
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (auto* sub : a->get_subcommands([](const CLI::App*) { return true; }))
      enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  CLI11_PARSE(app, argc, argv);
  apply_env(opt, seed_set, bound_set);

  try {
    if (*cat_check) {
      auto parsed = parse_category(slurp(cat_input));
      auto rep = check_category(*parsed.cat);
      for (auto& v : rep.violations) std::cout << v.kind << ": " << v.detail << "\n";
      std::cout << (rep.ok() ? "category ok\n" : "category violates the laws\n");
      return rep.ok() ? 0 : 1;
    }
    if (*site_check) {
      auto parsed = parse_site(slurp(site_input));
      auto cat_rep = check_category(*parsed.cat.cat);
      auto rep = check_site(parsed.site);
      for (auto& v : cat_rep.violations) std::cout << v.kind << ": " << v.detail << "\n";
      for (auto& v : rep.violations) std::cout << v.kind << ": " << v.detail << "\n";
      bool ok = cat_rep.ok() && rep.ok();
      std::cout << (ok ? "site ok\n" : "site violates the laws\n");
      return ok ? 0 : 1;
    }
    if (*site_show) {
      auto base = parse_trunc(show_spec);
      std::cout << print_site(base->site);
      return 0;
    }
    if (*site_sheafify) {
      auto base = parse_trunc(shf_site);
      Presheaf p = make_presheaf(shf_presheaf, base->site.cat);
      auto r = sheafify(p, base->site, opt.bound);
      if (!r.converged) {
        std::cout << "not converged after " << r.rounds << " rounds\n";
        return 2;
      }
      std::cout << "sheafified in " << r.rounds << " rounds; " << describe_sizes(r.sheaf)
                << "\n";
      return 0;
    }
    if (*th_validate) {
      auto t = make_theory(th_spec, th_site);
      auto rep = validate_theory(t);
      for (auto& v : rep.violations) std::cout << v.kind << ": " << v.detail << "\n";
      std::cout << (rep.ok() ? "theory ok\n" : "theory violates the laws\n");
      return rep.ok() ? 0 : 1;
    }
    if (*th_free) {
      auto t = make_theory(th_spec, th_site);
      auto f = free_model(set_sheaf(*t.base, th_gens), t, opt.bound);
      if (!f.converged) {
        std::cout << "not converged (bound " << opt.bound << ")\n";
        return 2;
      }
      std::cout << "free model on " << th_gens << " generators: carrier "
                << f.model.size[1] << "; " << describe_sizes(f.model) << "\n";
      return 0;
    }
    if (*th_adj) {
      auto t = make_theory(th_spec, th_site);
      return emit(adjunction_suite(t, th_max_points, opt.bound), opt);
    }
    if (*th_tensor) {
      auto ct = make_commutative(th_spec, th_site);
      auto left = model_of_algebra(free_algebra(ct.theory, tm_left));
      auto right = model_of_algebra(free_algebra(ct.theory, tm_right));
      TensorRoute route = tm_route == "day"          ? TensorRoute::day
                          : tm_route == "congruence" ? TensorRoute::congruence
                                                     : TensorRoute::both;
      auto r = model_tensor(left, right, ct, opt.bound, route);
      if (!r.converged) {
        std::cout << "not converged\n";
        return 2;
      }
      std::cout << "tensor carrier " << r.algebra.carrier << "\n";
      if (route == TensorRoute::both) {
        bool agree = r.route_iso.has_value();
        std::cout << (agree ? "routes agree up to isomorphism\n" : "ROUTES DISAGREE\n");
        return agree ? 0 : 1;
      }
      return 0;
    }
    if (*day_tensor_cmd || *day_hom_cmd) {
      auto m = make_monoidal(day_monoidal);
      Presheaf l = make_presheaf(day_left, m.base);
      Presheaf r = make_presheaf(day_right, m.base);
      if (*day_tensor_cmd) {
        auto d = day_tensor(l, r, view_of(m));
        std::cout << "day tensor: " << describe_sizes(d.presheaf) << "\n";
      } else {
        auto h = day_hom(l, r, view_of(m));
        std::cout << "day hom: " << describe_sizes(h.presheaf) << "\n";
      }
      return 0;
    }
    if (*day_laws_cmd) {
      auto m = make_monoidal(day_monoidal);
      return emit(day_laws_suite(m, day_monoidal), opt);
    }
    if (*fib_bc) {
      if (opt.field != "rat") {
        // prime field sweep with the same enumeration
        std::cout << "field F_" << opt.field << " not wired into this suite; using exact"
                  << " rationals\n";
      }
      return emit(beck_chevalley_suite(opt.seed, bc_max_base, bc_max_dim), opt);
    }
    if (*fib_proj)
      return emit(projection_formula_suite(opt.seed, pf_max_base, pf_max_dim), opt);
    if (*fib_ab) {
      auto t = make_theory(ab_theory, ab_site);
      return emit(alpha_beta_suite(t, ab_base_size), opt);
    }
    if (*kern_compose || *kern_tensor) {
      auto kf = parse_kernels(slurp(kern_input));
      if (!kf.kernels.count(kern_left) || !kf.kernels.count(kern_right))
        throw input_error("unknown kernel name");
      auto& k1 = kf.kernels[kern_left];
      auto& k2 = kf.kernels[kern_right];
      for (auto* k : {&k1, &k2}) {
        auto rep = check_kernel(*k);
        if (!rep.ok()) throw input_error("invalid kernel: " + rep.violations[0].detail);
      }
      KernelFile out;
      out.spaces = kf.spaces;
      out.space_names = kf.space_names;
      if (*kern_compose) {
        out.kernels["result"] = compose(k1, k2);
      } else {
        out.kernels["result"] = tensor_kernels(k1, k2);
        // product spaces are fresh; print rows only
      }
      out.kernel_names = {"result"};
      const Kernel& res = out.kernels["result"];
      std::cout << "result : " << res.src.space.size() << " -> " << res.dst.space.size()
                << " points, sup norm " << RatField{}.str(res.sup_norm()) << "\n";
      for (int x = 0; x < res.src.space.size(); ++x) {
        std::cout << "result " << res.src.space.point[x] << " = {";
        for (size_t i = 0; i < res.row[x].mass.size(); ++i)
          std::cout << (i ? ", " : "") << res.dst.space.point[res.row[x].mass[i].first]
                    << ": " << RatField{}.str(res.row[x].mass[i].second);
        std::cout << "}\n";
      }
      return 0;
    }
    if (*kern_lift) {
      auto kf = parse_kernels(slurp(kern_input));
      if (!kf.kernels.count(kern_name)) throw input_error("unknown kernel name");
      auto& k = kf.kernels[kern_name];
      auto rep = check_kernel(k);
      if (!rep.ok()) throw input_error("invalid kernel: " + rep.violations[0].detail);
      auto lift = cartesian_lift(k, k.base_arrow);
      bool ok = kernel_equal(compose(lift.lift, lift.projection), k);
      std::cout << "lift over the fibered product with " << lift.product.total.space.size()
                << " points; round trip " << (ok ? "exact" : "FAILED") << "\n";
      for (int z = 0; z < lift.lift.src.space.size(); ++z) {
        std::cout << "lift " << lift.lift.src.space.point[z] << " = {";
        for (size_t i = 0; i < lift.lift.row[z].mass.size(); ++i)
          std::cout << (i ? ", " : "")
                    << lift.lift.dst.space.point[lift.lift.row[z].mass[i].first] << ": "
                    << RatField{}.str(lift.lift.row[z].mass[i].second);
        std::cout << "}\n";
      }
      return ok ? 0 : 1;
    }
    if (*kern_laws) return emit(kern_laws_suite(opt.seed, opt.trials), opt);
  } catch (const parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }
  std::cerr << "no verb selected\n";
  return 3;
}
