#pragma once

#include <string>
#include <string_view>

#include <fmt/format.h>

namespace mediadisc::svg {

std::string escape(std::string_view text);

// Fixed two-decimal coordinates keep documents byte-stable.
inline std::string num(double v) {
  if (v > -0.005 && v < 0.005) return "0.00";
  return fmt::format("{:.2f}", v);
}

class Document {
 public:
  Document(double width, double height);

  void line(double x1, double y1, double x2, double y2, std::string_view cls);
  void text(double x, double y, std::string_view content, std::string_view cls, std::string_view anchor = "start");
  void raw(std::string_view element);

  std::string finish();

 private:
  std::string body_;
};

}  // namespace mediadisc::svg
