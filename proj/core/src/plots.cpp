#include "rfplan/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rfplan {

using nlohmann::json;

ParsedRunLog parse_runlog_jsonl(const std::string& text) {
  ParsedRunLog out;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(std::string("runlog: bad JSON line: ") + e.what());
    }

    if (!have_header) {
      if (!j.contains("schema") || j["schema"] != "rfplan-runlog") {
        throw std::runtime_error("runlog: missing schema header");
      }
      have_header = true;
      out.scenario = j.value("scenario", "");
      out.seed = j.value("seed", 0ull);
      if (j.contains("bounds")) {
        Environment env;
        const auto& b = j["bounds"];
        env.bounds = {{b[0], b[1]}, {b[2], b[3]}};
        const auto& home = j["home"];
        env.home = {home[0], home[1], home[2]};
        const auto& goal = j["goal"];
        env.goal = {goal[0], goal[1], goal[2]};
        for (const auto& o : j["obstacles"]) {
          env.obstacles.push_back({{o[0], o[1]}, o[2]});
        }
        out.environment = env;
        out.planning_height = j.value("planning_height", 0.0);
      }
      continue;
    }

    const std::string type = j.value("type", "");
    const double t = j.value("t", 0.0);
    out.end_time = std::max(out.end_time, t);
    if (type == "sensor_update") {
      if (j.value("disk_recorded", false)) {
        out.sensed.push_back({t, {j["x"], j["y"]}, j["range"]});
      }
      for (const auto& o : j["discovered"]) {
        out.discovered.push_back({t, {{o[0], o[1]}, o[2]}});
      }
    } else if (type == "graph_vertex") {
      out.vertices.push_back({t, j["id"], {j["x"], j["y"]}});
    } else if (type == "graph_edge") {
      out.edges.push_back({t, j["from"], j["to"]});
    } else if (type == "graph_promote") {
      for (const auto& id : j["ids"]) out.promotions.emplace_back(t, id.get<std::uint32_t>());
    } else if (type == "tracker_sample") {
      const auto& tr = j["tracker"];
      const auto& ref = j["ref"];
      out.path.push_back({t, {tr[0], tr[1]}, {ref[0], ref[1]}, tr[2], j.value("value", 0.0)});
    } else if (type == "plan_response") {
      ++out.responses;
    } else if (type == "violation") {
      ++out.violations;
    } else if (type == "termination") {
      out.outcome = j.value("outcome", "");
      out.ticks = j.value("ticks", 0ull);
    }
  }
  if (!have_header) throw std::runtime_error("runlog: empty log");
  return out;
}

namespace {

struct SvgCanvas {
  std::ostringstream body;
  Box world;
  double scale;
  double width, height;
  static constexpr double kMargin = 10.0;

  explicit SvgCanvas(const Box& bounds) : world(bounds) {
    scale = 60.0;
    width = bounds.width() * scale + 2 * kMargin;
    height = bounds.height() * scale + 2 * kMargin;
  }

  double sx(double x) const { return kMargin + (x - world.lo.x) * scale; }
  double sy(double y) const { return height - kMargin - (y - world.lo.y) * scale; }

  void circle(const Vec2& c, double r, const std::string& style) {
    body << "<circle cx=\"" << sx(c.x) << "\" cy=\"" << sy(c.y) << "\" r=\"" << r * scale
         << "\" " << style << "/>\n";
  }

  void line(const Vec2& a, const Vec2& b, const std::string& style) {
    body << "<line x1=\"" << sx(a.x) << "\" y1=\"" << sy(a.y) << "\" x2=\"" << sx(b.x)
         << "\" y2=\"" << sy(b.y) << "\" " << style << "/>\n";
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& style) {
    if (pts.size() < 2) return;
    body << "<polyline fill=\"none\" " << style << " points=\"";
    for (const Vec2& p : pts) body << sx(p.x) << "," << sy(p.y) << " ";
    body << "\"/>\n";
  }

  void text(const Vec2& at, const std::string& s) {
    body << "<text x=\"" << sx(at.x) << "\" y=\"" << sy(at.y)
         << "\" font-size=\"12\" font-family=\"sans-serif\">" << s << "</text>\n";
  }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::trunc);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body.str() << "</svg>\n";
  }
};

std::string heat_color(double u) {
  // Dark blue -> teal -> yellow ramp.
  u = std::clamp(u, 0.0, 1.0);
  const auto lerp = [](double a, double b, double w) { return a + (b - a) * w; };
  double r, g, b;
  if (u < 0.5) {
    const double w = u / 0.5;
    r = lerp(30, 40, w);
    g = lerp(40, 170, w);
    b = lerp(120, 160, w);
  } else {
    const double w = (u - 0.5) / 0.5;
    r = lerp(40, 250, w);
    g = lerp(170, 220, w);
    b = lerp(160, 60, w);
  }
  std::ostringstream os;
  os << "rgb(" << static_cast<int>(r) << "," << static_cast<int>(g) << ","
     << static_cast<int>(b) << ")";
  return os.str();
}

void emit_snapshot(const ParsedRunLog& log, double t, const std::string& path) {
  const Box bounds =
      log.environment ? log.environment->bounds : Box{{0.0, 0.0}, {10.0, 10.0}};
  SvgCanvas svg(bounds);

  // Sensed region.
  for (const auto& d : log.sensed) {
    if (d.t > t) break;
    svg.circle(d.center, d.range, "fill=\"#d6ecf5\" stroke=\"none\" opacity=\"0.55\"");
  }
  // True obstacles (outline) and discovered ones (filled).
  if (log.environment) {
    for (const Circle& o : log.environment->obstacles) {
      svg.circle(o.center, o.radius, "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"");
    }
  }
  for (const auto& d : log.discovered) {
    if (d.t > t) break;
    svg.circle(d.circle.center, d.circle.radius, "fill=\"#555555\" stroke=\"none\"");
  }

  // Graph edges: viable part in green, the rest in orange.
  std::vector<Vec2> positions;
  std::vector<char> viable;
  for (const auto& v : log.vertices) {
    if (v.id >= positions.size()) {
      positions.resize(v.id + 1);
      viable.resize(v.id + 1, 0);
    }
    if (v.t <= t) positions[v.id] = v.position;
  }
  for (const auto& [pt, id] : log.promotions) {
    if (pt <= t && id < viable.size()) viable[id] = 1;
  }
  for (const auto& e : log.edges) {
    if (e.t > t) break;
    if (e.from >= positions.size() || e.to >= positions.size()) continue;
    const bool both = viable[e.from] && viable[e.to];
    svg.line(positions[e.from], positions[e.to],
             both ? "stroke=\"#2e8b57\" stroke-width=\"1.4\" opacity=\"0.8\""
                  : "stroke=\"#e8a13d\" stroke-width=\"1\" opacity=\"0.6\"");
  }

  // Executed tracker path.
  std::vector<Vec2> executed;
  for (const auto& p : log.path) {
    if (p.t > t) break;
    executed.push_back(p.tracker);
  }
  svg.polyline(executed, "stroke=\"#c0392b\" stroke-width=\"2\"");

  if (log.environment) {
    svg.circle(log.environment->home.position(), 0.12,
               "fill=\"#2c3e90\" stroke=\"none\"");
    svg.text(log.environment->home.position() + Vec2{0.15, 0.15}, "home");
    svg.circle(log.environment->goal.position(), 0.12, "fill=\"#1d8348\" stroke=\"none\"");
    svg.text(log.environment->goal.position() + Vec2{0.15, 0.15}, "goal");
  }
  std::ostringstream label;
  label << "t = " << t << " s";
  svg.text({bounds.lo.x + 0.2, bounds.hi.y - 0.4}, label.str());

  svg.save(path);
}

void emit_heatmap(const TebArtifact& artifact, int resolution, const std::string& path) {
  const GridField<2> planar = planar_min_value(artifact.grid);
  const double d_max = planar.spec.axes[0].hi;
  const double px = 480.0 / resolution;

  std::ofstream os(path, std::ios::trunc);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
        "viewBox=\"0 0 480 480\">\n";
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  for (double v : planar.values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      const double x = (-1.0 + 2.0 * (ix + 0.5) / resolution) * d_max;
      const double y = (1.0 - 2.0 * (iy + 0.5) / resolution) * d_max;
      const double d = std::hypot(x, y);
      if (d > d_max) continue;
      const double psi = std::atan2(y, x);
      const double value = planar.interpolate({d, psi});
      const double u = (value - vmin) / std::max(1e-12, vmax - vmin);
      os << "<rect x=\"" << ix * px << "\" y=\"" << iy * px << "\" width=\"" << px + 0.5
         << "\" height=\"" << px + 0.5 << "\" fill=\"" << heat_color(u) << "\"/>\n";
    }
  }
  // TEB disc outline.
  const double r_px = artifact.bound.radius / d_max * 240.0;
  os << "<circle cx=\"240\" cy=\"240\" r=\"" << r_px
     << "\" fill=\"none\" stroke=\"white\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
  os << "<text x=\"8\" y=\"16\" font-size=\"13\" font-family=\"sans-serif\" fill=\"white\">"
        "min value over relative velocities; dashed: tracking bound</text>\n";
  os << "</svg>\n";
}

}  // namespace

std::vector<std::string> emit_plots(const ParsedRunLog& log, const std::string& out_dir,
                                    const TebArtifact* artifact, const PlotOptions& opts) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  std::vector<std::pair<double, std::size_t>> epochs;  // (time, sensed count)
  if (!log.path.empty() || !log.sensed.empty()) {
    const int n = std::max(1, opts.snapshots);
    for (int i = 1; i <= n; ++i) {
      const double t = log.end_time * i / n;
      std::ostringstream name;
      name << out_dir << "/snapshot_" << (i - 1) << ".svg";
      emit_snapshot(log, t, name.str());
      written.push_back(name.str());
      std::size_t count = 0;
      for (const auto& d : log.sensed) {
        if (d.t <= t) ++count;
      }
      epochs.emplace_back(t, count);
    }
  }

  if (artifact) {
    const std::string path = out_dir + "/value_heatmap.svg";
    emit_heatmap(*artifact, opts.heatmap_resolution, path);
    written.push_back(path);
  }

  double max_err = 0.0, max_z = 0.0;
  for (const auto& p : log.path) {
    max_err = std::max(max_err, distance(p.tracker, p.reference));
    max_z = std::max(max_z, std::abs(p.z - log.planning_height));
  }

  json metrics = {{"scenario", log.scenario},
                  {"seed", log.seed},
                  {"outcome", log.outcome},
                  {"ticks", log.ticks},
                  {"sim_time", log.end_time},
                  {"responses", log.responses},
                  {"violations", log.violations},
                  {"vertices", log.vertices.size()},
                  {"edges", log.edges.size()},
                  {"max_tracking_error", max_err},
                  {"max_z_error", max_z}};
  json epoch_json = json::array();
  for (const auto& [t, count] : epochs) {
    epoch_json.push_back({{"t", t}, {"sensed_disks", count}});
  }
  metrics["epochs"] = epoch_json;
  if (artifact) {
    metrics["teb_radius"] = artifact->bound.radius;
    metrics["teb_z_extent"] = artifact->bound.z_extent;
    metrics["teb_level"] = artifact->bound.level;
  }
  const std::string metrics_path = out_dir + "/metrics.json";
  std::ofstream os(metrics_path, std::ios::trunc);
  os << metrics.dump(2) << "\n";
  written.push_back(metrics_path);
  return written;
}

}  // namespace rfplan
