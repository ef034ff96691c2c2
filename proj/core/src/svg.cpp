#include "svg.hpp"

namespace mediadisc::svg {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

Document::Document(double width, double height) {
  body_ = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<style>\n"
      "  .axis {{ stroke: #444; stroke-width: 1; }}\n"
      "  .grid {{ stroke: #ddd; stroke-width: 1; stroke-dasharray: 3 3; }}\n"
      "  .label {{ font: 12px sans-serif; fill: #222; }}\n"
      "  .tick {{ font: 10px sans-serif; fill: #555; }}\n"
      "  .title {{ font: bold 14px sans-serif; fill: #111; }}\n"
      "  .axis-title {{ font: 12px sans-serif; fill: #333; }}\n"
      "  .legend {{ font: 11px sans-serif; fill: #222; }}\n"
      "</style>\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      num(width), num(height));
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view cls) {
  body_ += fmt::format("<line class=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", cls, num(x1), num(y1),
                       num(x2), num(y2));
}

void Document::text(double x, double y, std::string_view content, std::string_view cls, std::string_view anchor) {
  body_ += fmt::format("<text class=\"{}\" x=\"{}\" y=\"{}\" text-anchor=\"{}\">{}</text>\n", cls, num(x), num(y),
                       anchor, escape(content));
}

void Document::raw(std::string_view element) {
  body_ += element;
  body_.push_back('\n');
}

std::string Document::finish() {
  body_ += "</svg>\n";
  return std::move(body_);
}

}  // namespace mediadisc::svg
