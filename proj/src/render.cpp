#include "ctxcohom/render.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ctxcohom/errors.hpp"

namespace ctxcohom {

std::vector<std::size_t> cycle_order(const Scenario& sc) {
  const std::size_t n = sc.num_measurements();
  auto refuse = [](const std::string& why) { throw Error(ErrorCode::UnsupportedTopology, "cannot draw: " + why); };
  if (n < 3 || sc.num_contexts() != n) refuse("the cover is not a cycle");
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t c = 0; c < sc.num_contexts(); ++c) {
    if (sc.context(c).members.size() != 2) refuse("context " + sc.context_name(c) + " does not have two measurements");
    for (auto m : sc.context(c).members) incident[m].push_back(c);
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (incident[m].size() != 2) refuse("measurement " + sc.measurements()[m] + " is not in exactly two contexts");
  }
  std::vector<std::size_t> order{0};
  std::size_t ctx = incident[0][0];
  while (order.size() < n) {
    const auto& mem = sc.context(ctx).members;
    std::size_t next = mem[0] == order.back() ? mem[1] : mem[0];
    if (next == 0) refuse("the cover splits into several cycles");
    order.push_back(next);
    ctx = incident[next][0] == ctx ? incident[next][1] : incident[next][0];
  }
  const auto& last = sc.context(ctx).members;
  if (!((last[0] == order.back() && last[1] == 0) || (last[1] == order.back() && last[0] == 0))) {
    refuse("the cover is not a single cycle");
  }
  return order;
}

namespace {

struct Point {
  double x, y;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const EmpiricalModel& model, const std::string& title) {
  const Scenario& sc = model.scenario();
  const auto order = cycle_order(sc);
  const std::size_t n = order.size();
  const std::size_t k = sc.num_outcomes();

  const double width = 640, fibre_gap = 48, base_y = 120 + fibre_gap * static_cast<double>(k);
  const double height = base_y + 110, cx = width / 2, rx = 230, ry = 60;
  std::vector<Point> base(sc.num_measurements());
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    base[order[i]] = {cx + rx * std::cos(a), base_y + ry * std::sin(a)};
  }
  auto at = [&](std::size_t m, int outcome) {
    return Point{base[m].x, base[m].y - 50 - fibre_gap * static_cast<double>(outcome)};
  };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width) << "\" height=\""
    << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
  o << "<title>" << escape(title) << "</title>\n";
  o << "<style>.base{fill:none;stroke:#444;stroke-width:1.5}.fibre{stroke:#bbb;stroke-dasharray:4 3}"
       ".section{stroke:#1f5fa8;stroke-width:1.6}.global{fill:none;stroke:#c0392b;stroke-width:3;opacity:0.6}"
       ".outcome{fill:#222}text{font-family:sans-serif;font-size:13px}</style>\n";

  o << "<polygon class=\"base\" points=\"";
  for (std::size_t i = 0; i < n; ++i) o << (i ? " " : "") << fmt(base[order[i]].x) << "," << fmt(base[order[i]].y);
  o << "\"/>\n";
  for (std::size_t m : order) {
    const Point top = at(m, static_cast<int>(k) - 1);
    o << "<line class=\"fibre\" x1=\"" << fmt(base[m].x) << "\" y1=\"" << fmt(base[m].y) << "\" x2=\"" << fmt(top.x)
      << "\" y2=\"" << fmt(top.y - 10) << "\"/>\n";
    o << "<text x=\"" << fmt(base[m].x - 8) << "\" y=\"" << fmt(base[m].y + 22) << "\">"
      << escape(sc.measurements()[m]) << "</text>\n";
  }

  for (std::size_t c = 0; c < sc.num_contexts(); ++c) {
    const auto& mem = sc.context(c).members;
    for (const auto& s : model.support(c)) {
      const Point p = at(mem[0], s.values[mem[0]]), q = at(mem[1], s.values[mem[1]]);
      o << "<line class=\"section\" data-context=\"" << escape(sc.context_name(c)) << "\" x1=\"" << fmt(p.x)
        << "\" y1=\"" << fmt(p.y) << "\" x2=\"" << fmt(q.x) << "\" y2=\"" << fmt(q.y) << "\"/>\n";
    }
  }

  for (const auto& g : global_sections(model)) {
    o << "<polygon class=\"global\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
      const Point p = at(order[i], g.values[order[i]]);
      o << (i ? " " : "") << fmt(p.x) << "," << fmt(p.y);
    }
    o << "\"/>\n";
  }

  for (std::size_t m : order) {
    for (std::size_t v = 0; v < k; ++v) {
      const Point p = at(m, static_cast<int>(v));
      o << "<circle class=\"outcome\" cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"4\"/>\n";
      o << "<text x=\"" << fmt(p.x + 8) << "\" y=\"" << fmt(p.y + 4) << "\">" << escape(sc.outcomes()[v]) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace ctxcohom
