#include <fstream>
#include <map>
#include <sstream>

#include "ossl/boundary.hpp"
#include "ossl/errors.hpp"

namespace ossl {
namespace {

const char* region_fill(int cls) {
  static const char* fills[] = {"#dbe8f6", "#f8e1d4", "#e0f0dc", "#efe0f2"};
  return fills[static_cast<std::size_t>(cls) % 4];
}

const char* origin_colour(Origin o) {
  switch (o) {
    case Origin::kLabeledId: return "#1f4e9c";
    case Origin::kUnlabeledId: return "#6a8fc7";
    case Origin::kOodDistant: return "#c0392b";
    case Origin::kOodClose: return "#e08e0b";
    case Origin::kStyleTransferred: return "#2e8b57";
  }
  return "#555555";
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const BoundarySnapshot& snap, std::span<const PolarSample> points, const FigureOptions& opt) {
  if (snap.resolution < 1 || snap.predictions.size() != static_cast<std::size_t>(snap.resolution) * snap.resolution) {
    throw InputShapeError("render_svg: snapshot grid is inconsistent");
  }
  const double px = opt.pixels;
  const double scale = px / (2.0 * snap.extent);
  auto sx = [&](double x) { return (x + snap.extent) * scale; };
  auto sy = [&](double y) { return (snap.extent - y) * scale; };
  const double cell = px / snap.resolution;

  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << px << "\" viewBox=\"0 0 "
     << px << ' ' << px << "\">\n";
  if (!opt.title.empty()) os << "<title>" << escape_xml(opt.title) << "</title>\n";

  // Runs of equal predictions along each row become a single rect.
  os << "<g id=\"regions\" shape-rendering=\"crispEdges\">\n";
  for (int iy = 0; iy < snap.resolution; ++iy) {
    const double top = (snap.resolution - 1 - iy) * cell;
    int start = 0;
    for (int ix = 1; ix <= snap.resolution; ++ix) {
      if (ix == snap.resolution || snap.at(ix, iy) != snap.at(start, iy)) {
        os << "<rect x=\"" << start * cell << "\" y=\"" << top << "\" width=\"" << (ix - start) * cell
           << "\" height=\"" << cell << "\" fill=\"" << region_fill(snap.at(start, iy)) << "\"/>\n";
        start = ix;
      }
    }
  }
  os << "</g>\n";

  const auto segs = boundary_segments(snap);
  os << "<path id=\"boundary\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1.5\" d=\"";
  for (const auto& s : segs) {
    os << 'M' << sx(s[0]) << ' ' << sy(s[1]) << 'L' << sx(s[2]) << ' ' << sy(s[3]);
  }
  os << "\"/>\n";

  std::map<Origin, std::size_t> drawn;
  os << "<g id=\"points\">\n";
  for (const auto& p : points) {
    std::size_t& count = drawn[p.origin];
    if (count >= opt.max_points_per_origin) continue;
    ++count;
    os << "<circle cx=\"" << sx(p.x()) << "\" cy=\"" << sy(p.y()) << "\" r=\"1.6\" fill=\"" << origin_colour(p.origin)
       << "\" class=\"" << to_string(p.origin) << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void emit_figure(const BoundarySnapshot& snapshot, std::span<const PolarSample> points,
                 const std::filesystem::path& path, const FigureOptions& options) {
  const std::string svg = render_svg(snapshot, points, options);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write figure " + path.string());
  out << svg;
  if (!out) throw IoError("write failed for figure " + path.string());
}

}  // namespace ossl
