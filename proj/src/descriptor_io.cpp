#include "meanx/descriptor_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "meanx/errors.hpp"
#include "meanx/format.hpp"

namespace meanx {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MeanDescriptor mean() {
    if (eat("power:")) return MeanDescriptor::power(real());
    if (eat("qa:")) return MeanDescriptor::quasi_arithmetic(generator());
    if (eat("gini:")) {
      const double r = real();
      expect(',');
      return MeanDescriptor::gini(r, real());
    }
    if (eat("conj(")) {
      GeneratorDescriptor gen = generator();
      expect(',');
      MeanDescriptor base = mean();
      expect(')');
      return wrap([&] { return MeanDescriptor::conjugate(base, gen); });
    }
    if (eat("ext(")) {
      MeanDescriptor base = mean();
      expect(')');
      return wrap([&] { return MeanDescriptor::extended(base); });
    }
    if (eat("custom:min")) return min_mean();
    if (eat("custom:max")) return max_mean();
    fail("expected a mean");
  }

  GeneratorDescriptor generator() {
    if (eat("power:")) return GeneratorDescriptor::power(real());
    if (eat("log")) return GeneratorDescriptor::log();
    if (eat("exp:")) {
      const double a = real();
      if (a == 0.0) fail("exp generator needs a nonzero rate");
      return GeneratorDescriptor::exp(a);
    }
    fail("expected a generator");
  }

  void finish() const {
    if (pos_ != text_.size()) fail("unexpected trailing text");
  }

 private:
  template <class F>
  MeanDescriptor wrap(F make) {
    try {
      return make();
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    } catch (const ArityError& e) {
      fail(e.what());
    }
  }

  bool eat(std::string_view token) {
    if (text_.substr(pos_).starts_with(token)) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  double real() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    // from_chars rejects a leading '+', which decimal literals may carry.
    const char* start = (first != last && *first == '+') ? first + 1 : first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(start, last, v, std::chars_format::general);
    if (ec != std::errc() || !std::isfinite(v)) fail("expected a finite decimal number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(why + " at offset " + std::to_string(pos_) + " in \"" +
                     std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

MeanDescriptor make_extreme(bool upper) {
  MeanFlags declared{.symmetric = true, .strict = true, .monotone = true, .homogeneous = true};
  auto eval = [upper](std::span<const double> x) {
    return upper ? *std::max_element(x.begin(), x.end()) : *std::min_element(x.begin(), x.end());
  };
  return MeanDescriptor::custom(upper ? "max" : "min", eval, std::nullopt, Interval::real_line(),
                                declared);
}

}  // namespace

MeanDescriptor parse_mean(std::string_view text) {
  Parser p(text);
  MeanDescriptor m = p.mean();
  p.finish();
  return m;
}

GeneratorDescriptor parse_generator(std::string_view text) {
  Parser p(text);
  GeneratorDescriptor g = p.generator();
  p.finish();
  return g;
}

std::string to_string(const GeneratorDescriptor& gen) {
  if (const auto* p = gen.as_power()) {
    return p->r == 0.0 ? std::string("log") : "power:" + format_real(p->r);
  }
  if (const auto* e = gen.as_exp()) return "exp:" + format_real(e->a);
  return "custom-gen:" + std::get<CustomGen>(gen.kind()).name;
}

std::string to_string(const MeanDescriptor& mean) {
  struct Printer {
    std::string operator()(const PowerMean& m) const { return "power:" + format_real(m.r); }
    std::string operator()(const QuasiArithmeticMean& m) const { return "qa:" + to_string(m.gen); }
    std::string operator()(const GiniMean& m) const {
      return "gini:" + format_real(m.r) + "," + format_real(m.s);
    }
    std::string operator()(const ConjugateMean& m) const {
      return "conj(" + to_string(m.gen) + "," + to_string(m.base) + ")";
    }
    std::string operator()(const CustomMean& m) const { return "custom:" + m.name; }
    std::string operator()(const ExtendedMean& m) const {
      return "ext(" + to_string(m.base) + ")";
    }
  };
  return std::visit(Printer{}, mean.kind());
}

const MeanDescriptor& min_mean() {
  static const MeanDescriptor m = make_extreme(false);
  return m;
}

const MeanDescriptor& max_mean() {
  static const MeanDescriptor m = make_extreme(true);
  return m;
}

}  // namespace meanx
