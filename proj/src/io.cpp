#include "mkcx/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mkcx {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double to_double(std::string_view w, int line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc() || p != w.data() + w.size())
    parse_fail(line, "expected a number, got '" + std::string(w) + "'");
  return v;
}

int to_int(std::string_view w, int line) {
  int v = 0;
  auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc() || p != w.data() + w.size())
    parse_fail(line, "expected an integer, got '" + std::string(w) + "'");
  return v;
}

struct Line {
  int number;
  std::vector<std::string_view> words;
};

class Reader {
public:
  explicit Reader(std::string_view text) {
    int n = 0;
    std::size_t i = 0;
    while (i <= text.size()) {
      std::size_t j = text.find('\n', i);
      if (j == std::string_view::npos) j = text.size();
      ++n;
      auto words = split_words(text.substr(i, j - i));
      if (!words.empty() && words[0][0] != '#') lines_.push_back({n, std::move(words)});
      i = j + 1;
    }
  }
  bool done() const { return pos_ >= lines_.size(); }
  const Line& next() { return lines_[pos_++]; }
  const Line& expect(std::string_view keyword, int after) {
    if (done()) parse_fail(after, "expected '" + std::string(keyword) + "' record, got end of file");
    const Line& l = next();
    if (l.words[0] != keyword)
      parse_fail(l.number, "expected '" + std::string(keyword) + "' record, got '" +
                               std::string(l.words[0]) + "'");
    return l;
  }

private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

void expect_arity(const Line& l, std::size_t n) {
  if (l.words.size() != n)
    parse_fail(l.number, "'" + std::string(l.words[0]) + "' record takes " +
                             std::to_string(n - 1) + " fields, got " +
                             std::to_string(l.words.size() - 1));
}

MetricSimplex parse_simplex(const Line& l) {
  if (l.words.size() < 3) parse_fail(l.number, "simplex record needs an id and a dimension");
  MetricSimplex s;
  s.id = std::string(l.words[1]);
  s.dim = to_int(l.words[2], l.number);
  if (s.dim < 1 || s.dim > 3) parse_fail(l.number, "simplex dimension must be 1, 2 or 3");
  const std::size_t nv = s.dim + 1, ne = nv * (nv - 1) / 2;
  if (l.words.size() != 3 + nv + ne)
    parse_fail(l.number, "simplex of dimension " + std::to_string(s.dim) + " takes " +
                             std::to_string(nv) + " labels and " + std::to_string(ne) +
                             " lengths");
  for (std::size_t i = 0; i < nv; ++i) s.labels.emplace_back(l.words[3 + i]);
  for (std::size_t i = 0; i < ne; ++i) s.lengths.push_back(to_double(l.words[3 + nv + i], l.number));
  s.line = l.number;
  return s;
}

Gluing parse_glue(const Line& l) {
  if (l.words.size() < 5) parse_fail(l.number, "glue record needs two face references");
  Gluing g;
  g.a = {std::string(l.words[1]), to_int(l.words[2], l.number)};
  g.b = {std::string(l.words[3]), to_int(l.words[4], l.number)};
  for (std::size_t i = 5; i < l.words.size(); ++i) {
    auto w = l.words[i];
    auto eq = w.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == w.size())
      parse_fail(l.number, "vertex map entry must be <label>=<label>, got '" + std::string(w) + "'");
    g.vertex_map.emplace_back(std::string(w.substr(0, eq)), std::string(w.substr(eq + 1)));
  }
  g.line = l.number;
  return g;
}

void append_number(std::string& out, double x) {
  out += ' ';
  out += format_double(x);
}

} // namespace

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

bool same_structure(const ComplexFile& a, const ComplexFile& b) {
  auto same_simplex = [](const MetricSimplex& x, const MetricSimplex& y) {
    return x.id == y.id && x.dim == y.dim && x.labels == y.labels && x.lengths == y.lengths;
  };
  auto same_glue = [](const Gluing& x, const Gluing& y) {
    return x.a == y.a && x.b == y.b && x.vertex_map == y.vertex_map;
  };
  auto same_chart = [](const Chart2& x, const Chart2& y) { return x.x == y.x && x.y == y.y; };
  if (a.curvature != b.curvature || a.simplices.size() != b.simplices.size() ||
      a.gluings.size() != b.gluings.size() || a.polygon.has_value() != b.polygon.has_value() ||
      a.marked.size() != b.marked.size() || a.links != b.links)
    return false;
  for (std::size_t i = 0; i < a.simplices.size(); ++i)
    if (!same_simplex(a.simplices[i], b.simplices[i])) return false;
  for (std::size_t i = 0; i < a.gluings.size(); ++i)
    if (!same_glue(a.gluings[i], b.gluings[i])) return false;
  if (a.polygon) {
    if (a.polygon->size() != b.polygon->size()) return false;
    for (std::size_t i = 0; i < a.polygon->size(); ++i)
      if (!same_chart((*a.polygon)[i], (*b.polygon)[i])) return false;
  }
  for (std::size_t i = 0; i < a.marked.size(); ++i)
    if (!same_chart(a.marked[i].a, b.marked[i].a) || !same_chart(a.marked[i].b, b.marked[i].b))
      return false;
  return true;
}

ComplexFile parse_complex_file(std::string_view text) {
  Reader r(text);
  ComplexFile f;
  if (r.done()) parse_fail(1, "empty input, expected 'mkcx " + std::to_string(kFormatVersion) + "'");
  const Line& head = r.next();
  if (head.words[0] != "mkcx" || head.words.size() != 2)
    parse_fail(head.number, "expected header 'mkcx " + std::to_string(kFormatVersion) + "'");
  if (to_int(head.words[1], head.number) != kFormatVersion)
    parse_fail(head.number, "unsupported format version " + std::string(head.words[1]));
  bool have_curvature = false;
  while (!r.done()) {
    const Line& l = r.next();
    const auto kw = l.words[0];
    if (kw == "curvature") {
      expect_arity(l, 2);
      if (have_curvature) parse_fail(l.number, "duplicate curvature record");
      const int k = to_int(l.words[1], l.number);
      if (k < -1 || k > 1) parse_fail(l.number, "curvature must be -1, 0 or 1");
      f.curvature = Curvature(k);
      have_curvature = true;
    } else if (kw == "simplex") {
      f.simplices.push_back(parse_simplex(l));
    } else if (kw == "glue") {
      f.gluings.push_back(parse_glue(l));
    } else if (kw == "polygon") {
      expect_arity(l, 2);
      if (f.polygon) parse_fail(l.number, "duplicate polygon section");
      const int n = to_int(l.words[1], l.number);
      if (n < 0) parse_fail(l.number, "negative point count");
      std::vector<Chart2> pts;
      for (int i = 0; i < n; ++i) {
        const Line& p = r.expect("point", l.number);
        expect_arity(p, 3);
        pts.push_back({to_double(p.words[1], p.number), to_double(p.words[2], p.number)});
      }
      f.polygon = std::move(pts);
      f.polygon_line = l.number;
    } else if (kw == "marked") {
      expect_arity(l, 5);
      f.marked.push_back({{to_double(l.words[1], l.number), to_double(l.words[2], l.number)},
                          {to_double(l.words[3], l.number), to_double(l.words[4], l.number)}});
    } else if (kw == "link") {
      if (l.words.size() != 4 && l.words.size() != 7)
        parse_fail(l.number, "link record is 'link <name> <n> none' or 'link <name> <n> outward x y z'");
      LinkRecord rec;
      rec.name = std::string(l.words[1]);
      rec.line = l.number;
      const int n = to_int(l.words[2], l.number);
      if (n < 0) parse_fail(l.number, "negative direction count");
      if (l.words[3] == "outward" && l.words.size() == 7) {
        rec.outward = Vec3{to_double(l.words[4], l.number), to_double(l.words[5], l.number),
                           to_double(l.words[6], l.number)};
      } else if (!(l.words[3] == "none" && l.words.size() == 4)) {
        parse_fail(l.number, "expected 'none' or 'outward x y z'");
      }
      for (int i = 0; i < n; ++i) {
        const Line& d = r.expect("dir", l.number);
        expect_arity(d, 4);
        rec.directions.push_back({to_double(d.words[1], d.number), to_double(d.words[2], d.number),
                                  to_double(d.words[3], d.number)});
      }
      f.links.push_back(std::move(rec));
    } else {
      parse_fail(l.number, "unknown record '" + std::string(kw) + "'");
    }
  }
  if (!have_curvature) parse_fail(head.number, "missing curvature record");
  return f;
}

std::string emit_complex_file(const ComplexFile& f) {
  std::string out = "mkcx " + std::to_string(kFormatVersion) + "\n";
  out += "curvature " + std::to_string(f.curvature.kappa()) + "\n";
  for (const auto& s : f.simplices) {
    out += "simplex " + s.id + " " + std::to_string(s.dim);
    for (const auto& lab : s.labels) out += " " + lab;
    for (double x : s.lengths) append_number(out, x);
    out += '\n';
  }
  for (const auto& g : f.gluings) {
    out += "glue " + g.a.simplex + " " + std::to_string(g.a.face) + " " + g.b.simplex + " " +
           std::to_string(g.b.face);
    for (const auto& [x, y] : g.vertex_map) out += " " + x + "=" + y;
    out += '\n';
  }
  if (f.polygon) {
    out += "polygon " + std::to_string(f.polygon->size()) + "\n";
    for (const auto& p : *f.polygon) {
      out += "point";
      append_number(out, p.x);
      append_number(out, p.y);
      out += '\n';
    }
  }
  for (const auto& m : f.marked) {
    out += "marked";
    for (double x : {m.a.x, m.a.y, m.b.x, m.b.y}) append_number(out, x);
    out += '\n';
  }
  for (const auto& l : f.links) {
    out += "link " + l.name + " " + std::to_string(l.directions.size());
    if (l.outward) {
      out += " outward";
      for (double x : *l.outward) append_number(out, x);
    } else {
      out += " none";
    }
    out += '\n';
    for (const auto& d : l.directions) {
      out += "dir";
      for (double x : d) append_number(out, x);
      out += '\n';
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
}

MkComplex build_complex(const ComplexFile& file) {
  return build_complex(file.curvature, file.simplices, file.gluings);
}

HPolygon file_polygon(const ComplexFile& file) {
  if (!file.polygon) throw Error(ErrorKind::Input, "input has no polygon section");
  return HPolygon::from_chart(*file.polygon);
}

std::vector<OrientedLink> file_links(const ComplexFile& file) {
  std::vector<OrientedLink> out;
  for (const auto& l : file.links) {
    try {
      out.push_back({SphericalPolygon::from_directions(l.directions), l.outward});
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(l.line) + ": link " + l.name + ": " + e.what());
    }
  }
  return out;
}

} // namespace mkcx
