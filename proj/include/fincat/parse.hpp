#pragma once

#include <cctype>
#include <sstream>

#include "fincat/bundle.hpp"
#include "fincat/kernel.hpp"
#include "fincat/presheaf.hpp"
#include "fincat/site.hpp"
#include "fincat/theory.hpp"

namespace fincat {

/// Parse error with position.
struct parse_error : input_error {
  parse_error(int line, const std::string& msg)
      : input_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
  int line_no;
};

namespace detail {

/// Line scanner: strips comments and blank lines, splits on whitespace and
/// the punctuation tokens : -> = { } , + . [ ] used by the formats.
struct Lines {
  struct Line {
    int no;
    std::vector<std::string> tok;
  };
  std::vector<Line> lines;

  explicit Lines(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::vector<std::string> tok;
      std::string cur;
      auto flush = [&] {
        if (!cur.empty()) tok.push_back(cur);
        cur.clear();
      };
      for (size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
          flush();
        } else if (c == '-' && i + 1 < raw.size() && raw[i + 1] == '>') {
          flush();
          tok.push_back("->");
          ++i;
        } else if (std::string(":={},+.[]").find(c) != std::string::npos) {
          flush();
          tok.push_back(std::string(1, c));
        } else {
          cur.push_back(c);
        }
      }
      flush();
      if (!tok.empty()) lines.push_back({no, std::move(tok)});
    }
  }
};

inline void expect(const Lines::Line& l, size_t i, const std::string& what) {
  if (i >= l.tok.size() || l.tok[i] != what)
    throw parse_error(l.no, "expected '" + what + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Category and site formats.

struct ParsedCategory {
  CatPtr cat;
  std::map<std::string, int> obj_by_name;
  std::map<std::string, int> arr_by_name;

  int obj(const std::string& n, int line) const {
    auto it = obj_by_name.find(n);
    if (it == obj_by_name.end()) throw parse_error(line, "undeclared object '" + n + "'");
    return it->second;
  }
  int arr(const std::string& n, int line) const {
    auto it = arr_by_name.find(n);
    if (it == arr_by_name.end()) throw parse_error(line, "undeclared arrow '" + n + "'");
    return it->second;
  }
};

/// Lines: obj <name> | arr <name> : <src> -> <dst> | cmp <g> . <f> = <h> |
/// id <obj> = <arr>. Later blocks (cover, tau, ...) are ignored here so the
/// category parser can be reused by the site and theory formats.
inline ParsedCategory parse_category(const std::string& text) {
  detail::Lines ls(text);
  ParsedCategory out;
  CategoryBuilder b;
  struct Pending {
    int line;
    std::vector<std::string> tok;
  };
  std::vector<Pending> cmp, ids;
  for (auto& l : ls.lines) {
    const auto& t = l.tok;
    if (t[0] == "obj") {
      if (t.size() != 2) throw parse_error(l.no, "obj takes one name");
      if (out.obj_by_name.count(t[1]))
        throw parse_error(l.no, "duplicate object '" + t[1] + "'");
      out.obj_by_name[t[1]] = b.add_object(t[1]);
    } else if (t[0] == "arr") {
      // arr name : src -> dst
      if (t.size() != 6 || t[2] != ":" || t[4] != "->")
        throw parse_error(l.no, "expected 'arr <name>: <src> -> <dst>'");
      if (out.arr_by_name.count(t[1]))
        throw parse_error(l.no, "duplicate arrow '" + t[1] + "'");
      out.arr_by_name[t[1]] =
          b.add_arrow(out.obj(t[3], l.no), out.obj(t[5], l.no), t[1]);
    } else if (t[0] == "cmp" || t[0] == "id") {
      (t[0] == "cmp" ? cmp : ids).push_back({l.no, t});
    } else if (t[0] == "cover" || t[0] == "tau" || t[0] == "val" || t[0] == "act") {
      continue;  // other formats layered on top
    } else {
      throw parse_error(l.no, "unknown directive '" + t[0] + "'");
    }
  }
  for (auto& p : ids) {
    // id obj = arr
    if (p.tok.size() != 4 || p.tok[2] != "=")
      throw parse_error(p.line, "expected 'id <obj> = <arr>'");
    b.set_identity(out.obj(p.tok[1], p.line), out.arr(p.tok[3], p.line));
  }
  for (auto& p : cmp) {
    // cmp g . f = h
    if (p.tok.size() != 6 || p.tok[2] != "." || p.tok[4] != "=")
      throw parse_error(p.line, "expected 'cmp <g>.<f> = <h>'");
    b.set_composite(out.arr(p.tok[1], p.line), out.arr(p.tok[3], p.line),
                    out.arr(p.tok[5], p.line));
  }
  out.cat = b.build();
  return out;
}

inline std::string print_category(const FinCategory& c) {
  std::ostringstream o;
  for (int i = 0; i < c.object_count; ++i) o << "obj " << c.oname(i) << "\n";
  for (int a = 0; a < c.arrow_count(); ++a)
    o << "arr " << c.aname(a) << ": " << c.oname(c.src(a)) << " -> "
      << c.oname(c.tgt(a)) << "\n";
  for (int i = 0; i < c.object_count; ++i)
    o << "id " << c.oname(i) << " = " << c.aname(c.identity[i]) << "\n";
  for (int g = 0; g < c.arrow_count(); ++g)
    for (int f = 0; f < c.arrow_count(); ++f) {
      if (!c.composable(g, f)) continue;
      bool forced = g == c.identity[c.tgt(f)] || f == c.identity[c.src(g)];
      if (forced) continue;
      o << "cmp " << c.aname(g) << "." << c.aname(f) << " = " << c.aname(c.compose(g, f))
        << "\n";
    }
  return o.str();
}

struct ParsedSite {
  ParsedCategory cat;
  FiniteSite site;
};

/// Category format plus: cover <apex> = <arr1> + <arr2> [+ ...] and
/// cover <apex> = empty.
inline ParsedSite parse_site(const std::string& text) {
  ParsedSite out;
  out.cat = parse_category(text);
  out.site.cat = out.cat.cat;
  detail::Lines ls(text);
  for (auto& l : ls.lines) {
    if (l.tok[0] != "cover") continue;
    const auto& t = l.tok;
    if (t.size() < 4 || t[2] != "=") throw parse_error(l.no, "expected 'cover <apex> = ...'");
    FiniteSite::Cover cov;
    cov.apex = out.cat.obj(t[1], l.no);
    if (t.size() == 4 && t[3] == "empty") {
      out.site.covers.push_back(cov);
      continue;
    }
    for (size_t i = 3; i < t.size(); i += 2) {
      cov.arrows.push_back(out.cat.arr(t[i], l.no));
      if (i + 1 < t.size() && t[i + 1] != "+")
        throw parse_error(l.no, "expected '+' between cover arrows");
    }
    for (int a : cov.arrows)
      if (out.cat.cat->tgt(a) != cov.apex)
        throw parse_error(l.no, "cover arrow does not land in the apex");
    out.site.covers.push_back(cov);
  }
  return out;
}

inline std::string print_site(const FiniteSite& s) {
  std::ostringstream o;
  o << print_category(*s.cat);
  for (auto& cov : s.covers) {
    o << "cover " << s.cat->oname(cov.apex) << " = ";
    if (cov.arrows.empty()) {
      o << "empty\n";
      continue;
    }
    for (size_t i = 0; i < cov.arrows.size(); ++i)
      o << (i ? " + " : "") << s.cat->aname(cov.arrows[i]);
    o << "\n";
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// Presheaf format: val <obj> = {e1,...} and act <arr>: e -> e'.

struct ParsedPresheaf {
  Presheaf presheaf;
  std::vector<std::vector<std::string>> labels;  // per object, index order
};

inline ParsedPresheaf parse_presheaf(const std::string& text, const ParsedCategory& pc) {
  detail::Lines ls(text);
  ParsedPresheaf out;
  const FinCategory& c = *pc.cat;
  out.presheaf.cat = pc.cat;
  out.presheaf.size.assign(c.object_count, 0);
  out.labels.resize(c.object_count);
  std::vector<std::map<std::string, int>> index(c.object_count);
  for (auto& l : ls.lines) {
    if (l.tok[0] != "val") continue;
    const auto& t = l.tok;
    if (t.size() < 5 || t[2] != "=" || t[3] != "{")
      throw parse_error(l.no, "expected 'val <obj> = {e1,...}'");
    int obj = pc.obj(t[1], l.no);
    if (!out.labels[obj].empty()) throw parse_error(l.no, "duplicate val for object");
    for (size_t i = 4; i < t.size() && t[i] != "}"; ++i) {
      if (t[i] == ",") continue;
      if (index[obj].count(t[i])) throw parse_error(l.no, "duplicate element " + t[i]);
      index[obj][t[i]] = static_cast<int>(out.labels[obj].size());
      out.labels[obj].push_back(t[i]);
    }
    out.presheaf.size[obj] = static_cast<int>(out.labels[obj].size());
  }
  out.presheaf.action.resize(c.arrow_count());
  for (int a = 0; a < c.arrow_count(); ++a)
    out.presheaf.action[a].assign(out.presheaf.size[c.tgt(a)], -1);
  for (auto& l : ls.lines) {
    if (l.tok[0] != "act") continue;
    const auto& t = l.tok;
    if (t.size() != 6 || t[2] != ":" || t[4] != "->")
      throw parse_error(l.no, "expected 'act <arr>: e -> e''");
    int a = pc.arr(t[1], l.no);
    auto its = index[c.tgt(a)].find(t[3]);
    auto itd = index[c.src(a)].find(t[5]);
    if (its == index[c.tgt(a)].end() || itd == index[c.src(a)].end())
      throw parse_error(l.no, "undeclared element in act");
    out.presheaf.action[a][its->second] = itd->second;
  }
  for (int a = 0; a < c.arrow_count(); ++a)
    for (int x = 0; x < out.presheaf.size[c.tgt(a)]; ++x)
      if (out.presheaf.action[a][x] < 0)
        throw input_error("presheaf action of " + c.aname(a) + " is not total at element " +
                          out.labels[c.tgt(a)][x]);
  return out;
}

inline std::string print_presheaf(const ParsedPresheaf& pp) {
  std::ostringstream o;
  const FinCategory& c = *pp.presheaf.cat;
  for (int obj = 0; obj < c.object_count; ++obj) {
    o << "val " << c.oname(obj) << " = {";
    for (int e = 0; e < pp.presheaf.size[obj]; ++e)
      o << (e ? "," : "") << pp.labels[obj][e];
    o << "}\n";
  }
  for (int a = 0; a < c.arrow_count(); ++a)
    for (int x = 0; x < pp.presheaf.size[c.tgt(a)]; ++x)
      o << "act " << c.aname(a) << ": " << pp.labels[c.tgt(a)][x] << " -> "
        << pp.labels[c.src(a)][pp.presheaf.act(a, x)] << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Theory format: category block for the theory plus tau lines mapping site
// arrows to theory arrows.

struct ParsedTheory {
  ParsedCategory theory;
  std::vector<int> tau_arr;  // per site arrow
};

inline ParsedTheory parse_theory(const std::string& text, const ParsedCategory& site_cat) {
  ParsedTheory out;
  out.theory = parse_category(text);
  out.tau_arr.assign(site_cat.cat->arrow_count(), -1);
  detail::Lines ls(text);
  for (auto& l : ls.lines) {
    if (l.tok[0] != "tau") continue;
    const auto& t = l.tok;
    if (t.size() != 4 || t[2] != "=")
      throw parse_error(l.no, "expected 'tau <site-arrow> = <theory-arrow>'");
    out.tau_arr[site_cat.arr(t[1], l.no)] = out.theory.arr(t[3], l.no);
  }
  for (size_t a = 0; a < out.tau_arr.size(); ++a)
    if (out.tau_arr[a] < 0)
      throw input_error("tau is not total: missing image of " +
                        site_cat.cat->aname(static_cast<int>(a)));
  return out;
}

inline std::string print_theory(const TheoryPresentation& t) {
  std::ostringstream o;
  o << print_category(*t.theory);
  for (int a = 0; a < t.site().cat->arrow_count(); ++a)
    o << "tau " << t.site().cat->aname(a) << " = " << t.theory->aname(t.tau.arr[a])
      << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Bundle format: base = {p1,...}, fiber p = dim d, map p = [[a/b, ...], ...].

inline Rat parse_rat(const std::string& s, int line) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(boost::multiprecision::cpp_int(s));
    return Rat(boost::multiprecision::cpp_int(s.substr(0, slash))) /
           Rat(boost::multiprecision::cpp_int(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw parse_error(line, "bad rational '" + s + "'");
  }
}

struct ParsedBundle {
  std::vector<std::string> base_points;
  LinearBundle<RatField> bundle;
  std::map<std::string, Matrix<RatField>> maps;  // optional per-point matrices
};

inline ParsedBundle parse_bundle(const std::string& text) {
  detail::Lines ls(text);
  ParsedBundle out;
  std::map<std::string, int> point_index;
  for (auto& l : ls.lines) {
    const auto& t = l.tok;
    if (t[0] == "base") {
      if (t.size() < 4 || t[1] != "=" || t[2] != "{")
        throw parse_error(l.no, "expected 'base = {p1,...}'");
      for (size_t i = 3; i < t.size() && t[i] != "}"; ++i) {
        if (t[i] == ",") continue;
        if (point_index.count(t[i])) throw parse_error(l.no, "duplicate point " + t[i]);
        point_index[t[i]] = static_cast<int>(out.base_points.size());
        out.base_points.push_back(t[i]);
      }
      out.bundle.base_size = static_cast<int>(out.base_points.size());
      out.bundle.dim.assign(out.bundle.base_size, 0);
    } else if (t[0] == "fiber") {
      // fiber p = dim d
      if (t.size() != 5 || t[2] != "=" || t[3] != "dim")
        throw parse_error(l.no, "expected 'fiber <p> = dim <d>'");
      auto it = point_index.find(t[1]);
      if (it == point_index.end()) throw parse_error(l.no, "undeclared point " + t[1]);
      out.bundle.dim[it->second] = std::stoi(t[4]);
    } else if (t[0] == "map") {
      // map p = [[...],[...]]
      auto it = point_index.find(t[1]);
      if (it == point_index.end()) throw parse_error(l.no, "undeclared point " + t[1]);
      detail::expect(l, 2, "=");
      std::vector<std::vector<Rat>> rows;
      size_t i = 3;
      detail::expect(l, i++, "[");
      while (i < t.size() && t[i] == "[") {
        ++i;
        std::vector<Rat> row;
        while (i < t.size() && t[i] != "]") {
          if (t[i] == ",") {
            ++i;
            continue;
          }
          row.push_back(parse_rat(t[i], l.no));
          ++i;
        }
        ++i;  // closing ]
        rows.push_back(std::move(row));
        if (i < t.size() && t[i] == ",") ++i;
      }
      RatField f;
      Matrix<RatField> m(static_cast<int>(rows.size()),
                         rows.empty() ? 0 : static_cast<int>(rows[0].size()), f);
      for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
          throw parse_error(l.no, "ragged matrix rows");
        for (size_t c2 = 0; c2 < rows[r].size(); ++c2)
          m.at(static_cast<int>(r), static_cast<int>(c2)) = rows[r][c2];
      }
      out.maps[t[1]] = std::move(m);
    } else {
      throw parse_error(l.no, "unknown directive '" + t[0] + "'");
    }
  }
  return out;
}

inline std::string print_bundle(const ParsedBundle& b) {
  std::ostringstream o;
  o << "base = {";
  for (size_t i = 0; i < b.base_points.size(); ++i)
    o << (i ? "," : "") << b.base_points[i];
  o << "}\n";
  for (size_t i = 0; i < b.base_points.size(); ++i)
    o << "fiber " << b.base_points[i] << " = dim " << b.bundle.dim[i] << "\n";
  RatField f;
  for (auto& [p, m] : b.maps) {
    o << "map " << p << " = [";
    for (int r = 0; r < m.rows; ++r) {
      o << (r ? ",[" : "[");
      for (int c2 = 0; c2 < m.cols; ++c2) o << (c2 ? "," : "") << f.str(m.at(r, c2));
      o << "]";
    }
    o << "]\n";
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// Kernel file format: spaces, base maps, named base arrows, kernels.

struct KernelFile {
  std::vector<std::string> space_names;
  std::map<std::string, BasedSpace> spaces;
  std::map<std::string, std::pair<std::pair<std::string, std::string>, std::vector<int>>>
      base_arrows;  // name -> ((from base-of space, to base-of space), table)
  std::vector<std::string> kernel_names;
  std::map<std::string, Kernel> kernels;
};

/// Lines:
///   space X = {x1,...}
///   over X -> I : x1=i1, x2=i2, ...          (I names another space)
///   basemap phi : I1 -> I2 : i1=j1, ...
///   kernel k : X -> Y over phi
///   k x1 = {y1: a/b, y2: c/d}
inline KernelFile parse_kernels(const std::string& text) {
  detail::Lines ls(text);
  KernelFile out;
  std::map<std::string, std::map<std::string, int>> point_index;
  std::map<std::string, MeasSpace> plain;  // spaces before basing
  std::map<std::string, std::string> base_of;

  auto get_space = [&](const std::string& n, int line) -> MeasSpace& {
    auto it = plain.find(n);
    if (it == plain.end()) throw parse_error(line, "undeclared space '" + n + "'");
    return it->second;
  };

  for (auto& l : ls.lines) {
    const auto& t = l.tok;
    if (t[0] == "space") {
      if (t.size() < 5 || t[2] != "=" || t[3] != "{")
        throw parse_error(l.no, "expected 'space <X> = {x1,...}'");
      if (plain.count(t[1])) throw parse_error(l.no, "duplicate space " + t[1]);
      MeasSpace s;
      for (size_t i = 4; i < t.size() && t[i] != "}"; ++i) {
        if (t[i] == ",") continue;
        if (point_index[t[1]].count(t[i]))
          throw parse_error(l.no, "duplicate point " + t[i]);
        point_index[t[1]][t[i]] = s.size();
        s.point.push_back(t[i]);
      }
      plain[t[1]] = std::move(s);
      out.space_names.push_back(t[1]);
    } else if (t[0] == "over") {
      // over X -> I : x=i, ...
      if (t.size() < 5 || t[2] != "->" || t[4] != ":")
        throw parse_error(l.no, "expected 'over <X> -> <I> : x=i,...'");
      MeasSpace& xs = get_space(t[1], l.no);
      MeasSpace& is = get_space(t[3], l.no);
      std::vector<int> tb(xs.size(), -1);
      for (size_t i = 5; i + 2 < t.size() + 1; i += 4) {
        if (i + 2 >= t.size() + 1) break;
        auto itx = point_index[t[1]].find(t[i]);
        if (itx == point_index[t[1]].end())
          throw parse_error(l.no, "unknown point " + t[i]);
        if (t[i + 1] != "=") throw parse_error(l.no, "expected '='");
        auto iti = point_index[t[3]].find(t[i + 2]);
        if (iti == point_index[t[3]].end())
          throw parse_error(l.no, "unknown base point " + t[i + 2]);
        tb[itx->second] = iti->second;
        if (i + 3 < t.size() && t[i + 3] != ",") throw parse_error(l.no, "expected ','");
      }
      for (int v : tb)
        if (v < 0) throw parse_error(l.no, "base map is not total");
      BasedSpace bs;
      bs.space = xs;
      bs.base = is;
      bs.to_base = tb;
      out.spaces[t[1]] = std::move(bs);
      base_of[t[1]] = t[3];
    } else if (t[0] == "basemap") {
      // basemap phi : I1 -> I2 : i=j, ...
      if (t.size() < 7 || t[2] != ":" || t[4] != "->" || t[6] != ":")
        throw parse_error(l.no, "expected 'basemap <phi> : <I1> -> <I2> : i=j,...'");
      MeasSpace& i1 = get_space(t[3], l.no);
      get_space(t[5], l.no);
      std::vector<int> tb(i1.size(), -1);
      for (size_t i = 7; i + 2 < t.size() + 1; i += 4) {
        auto ita = point_index[t[3]].find(t[i]);
        if (ita == point_index[t[3]].end()) throw parse_error(l.no, "unknown point " + t[i]);
        if (t[i + 1] != "=") throw parse_error(l.no, "expected '='");
        auto itb = point_index[t[5]].find(t[i + 2]);
        if (itb == point_index[t[5]].end())
          throw parse_error(l.no, "unknown point " + t[i + 2]);
        tb[ita->second] = itb->second;
        if (i + 3 < t.size() && t[i + 3] != ",") throw parse_error(l.no, "expected ','");
      }
      for (int v : tb)
        if (v < 0) throw parse_error(l.no, "base map is not total");
      out.base_arrows[t[1]] = {{t[3], t[5]}, tb};
    } else if (t[0] == "kernel") {
      // kernel k : X -> Y over phi
      if (t.size() != 8 || t[2] != ":" || t[4] != "->" || t[6] != "over")
        throw parse_error(l.no, "expected 'kernel <k> : <X> -> <Y> over <phi>'");
      if (!out.spaces.count(t[3]) || !out.spaces.count(t[5]))
        throw parse_error(l.no, "kernel endpoints must be based spaces");
      Kernel k;
      k.src = out.spaces[t[3]];
      k.dst = out.spaces[t[5]];
      if (t[7] == "id") {
        if (!(k.src.base == k.dst.base))
          throw parse_error(l.no, "'over id' needs equal bases");
        k.base_arrow.resize(k.src.base.size());
        std::iota(k.base_arrow.begin(), k.base_arrow.end(), 0);
      } else {
        auto it = out.base_arrows.find(t[7]);
        if (it == out.base_arrows.end())
          throw parse_error(l.no, "undeclared base map " + t[7]);
        if (it->second.first.first != base_of[t[3]] ||
            it->second.first.second != base_of[t[5]])
          throw parse_error(l.no, "base map endpoints do not match the kernel");
        k.base_arrow = it->second.second;
      }
      k.row.resize(k.src.space.size());
      out.kernels[t[1]] = std::move(k);
      out.kernel_names.push_back(t[1]);
    } else if (out.kernels.count(t[0])) {
      // k x = {y: a/b, ...}
      Kernel& k = out.kernels[t[0]];
      if (t.size() < 4 || t[2] != "=" || t[3] != "{")
        throw parse_error(l.no, "expected '<k> <x> = {y: a/b, ...}'");
      // find the source/target space names through stored labels
      int x = -1;
      for (int p = 0; p < k.src.space.size(); ++p)
        if (k.src.space.point[p] == t[1]) x = p;
      if (x < 0) throw parse_error(l.no, "unknown source point " + t[1]);
      for (size_t i = 4; i < t.size() && t[i] != "}";) {
        if (t[i] == ",") {
          ++i;
          continue;
        }
        int y = -1;
        for (int p = 0; p < k.dst.space.size(); ++p)
          if (k.dst.space.point[p] == t[i]) y = p;
        if (y < 0) throw parse_error(l.no, "unknown target point " + t[i]);
        if (i + 2 >= t.size() || t[i + 1] != ":")
          throw parse_error(l.no, "expected '<y>: <mass>'");
        k.row[x].add(y, parse_rat(t[i + 2], l.no));
        i += 3;
      }
      k.row[x].normalize();
    } else {
      throw parse_error(l.no, "unknown directive '" + t[0] + "'");
    }
  }
  return out;
}

inline std::string print_kernels(const KernelFile& kf) {
  std::ostringstream o;
  std::map<std::string, std::string> base_of;
  for (const auto& name : kf.space_names) {
    auto it = kf.spaces.find(name);
    const MeasSpace* s = nullptr;
    if (it != kf.spaces.end()) s = &it->second.space;
    if (!s) continue;
    o << "space " << name << " = {";
    for (int p = 0; p < s->size(); ++p) o << (p ? "," : "") << s->point[p];
    o << "}\n";
  }
  for (const auto& name : kf.space_names) {
    auto it = kf.spaces.find(name);
    if (it == kf.spaces.end()) continue;
    // recover the base space name by matching labels
    std::string base_name;
    for (auto& [n2, bs2] : kf.spaces)
      if (bs2.space == it->second.base) base_name = n2;
    if (base_name.empty()) continue;
    o << "over " << name << " -> " << base_name << " : ";
    for (int p = 0; p < it->second.space.size(); ++p)
      o << (p ? ", " : "") << it->second.space.point[p] << "="
        << it->second.base.point[it->second.to_base[p]];
    o << "\n";
  }
  for (auto& [n, ba] : kf.base_arrows) {
    o << "basemap " << n << " : " << ba.first.first << " -> " << ba.first.second << " : ";
    const MeasSpace& from = kf.spaces.at(ba.first.first).space;
    const MeasSpace& to = kf.spaces.at(ba.first.second).space;
    for (size_t i = 0; i < ba.second.size(); ++i)
      o << (i ? ", " : "") << from.point[i] << "=" << to.point[ba.second[i]];
    o << "\n";
  }
  RatField f;
  for (const auto& name : kf.kernel_names) {
    const Kernel& k = kf.kernels.at(name);
    // space names by label match
    std::string sn, dn, phin = "id";
    for (auto& [n2, bs2] : kf.spaces) {
      if (bs2 == k.src) sn = n2;
      if (bs2 == k.dst) dn = n2;
    }
    for (auto& [n2, ba] : kf.base_arrows)
      if (ba.second == k.base_arrow && kf.spaces.at(sn).base ==
                                           kf.spaces.at(ba.first.first).space)
        phin = n2;
    o << "kernel " << name << " : " << sn << " -> " << dn << " over " << phin << "\n";
    for (int x = 0; x < k.src.space.size(); ++x) {
      o << name << " " << k.src.space.point[x] << " = {";
      AtomicMeasure m = k.row[x];
      m.normalize();
      for (size_t i = 0; i < m.mass.size(); ++i)
        o << (i ? ", " : "") << k.dst.space.point[m.mass[i].first] << ": "
          << f.str(m.mass[i].second);
      o << "}\n";
    }
  }
  return o.str();
}

}  // namespace fincat
