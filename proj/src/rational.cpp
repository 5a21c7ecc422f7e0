#include "radmax/rational.hpp"

#include <cctype>

namespace radmax {

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::int64_t n = std::stoll(text.substr(0, slash));
    std::int64_t d = std::stoll(text.substr(slash + 1));
    return Rational(n, d);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_len = text.size() - dot - 1;
  if (frac_len > 18) throw std::invalid_argument("decimal literal too long: " + text);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  return Rational(std::stoll(digits), den);
}

}  // namespace radmax
