#include "slowhom/log_value.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace slowhom {

double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

LogValue LogValue::from_ln(double ln_mag, int sign) {
    if (std::isnan(ln_mag)) throw std::domain_error("LogValue: NaN log-magnitude");
    LogValue v;
    if (sign == 0 || ln_mag == -std::numeric_limits<double>::infinity()) return v;
    v.sign_ = sign > 0 ? 1 : -1;
    v.ln_mag_ = ln_mag;
    return v;
}

LogValue LogValue::from_double(double x) {
    if (std::isnan(x)) throw std::domain_error("LogValue: NaN");
    if (x == 0.0) return {};
    return from_ln(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogValue::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(ln_mag_);
}

LogValue LogValue::abs() const {
    LogValue v = *this;
    if (v.sign_ != 0) v.sign_ = 1;
    return v;
}

LogValue LogValue::pow(double p) const {
    if (sign_ < 0) throw std::domain_error("LogValue::pow of a negative value");
    if (sign_ == 0) {
        if (p > 0) return {};
        throw std::domain_error("LogValue::pow: zero to a non-positive power");
    }
    return from_ln(p * ln_mag_);
}

LogValue LogValue::operator-() const {
    LogValue v = *this;
    v.sign_ = -v.sign_;
    return v;
}

LogValue& LogValue::operator+=(const LogValue& o) {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) return *this = o;
    if (sign_ == o.sign_) {
        ln_mag_ = log_add_exp(ln_mag_, o.ln_mag_);
        return *this;
    }
    if (ln_mag_ == o.ln_mag_) return *this = LogValue{};
    const bool self_larger = ln_mag_ > o.ln_mag_;
    const double hi = self_larger ? ln_mag_ : o.ln_mag_;
    const double lo = self_larger ? o.ln_mag_ : ln_mag_;
    const int s = self_larger ? sign_ : o.sign_;
    const double diff = std::log1p(-std::exp(lo - hi));
    if (diff == -std::numeric_limits<double>::infinity()) return *this = LogValue{};
    sign_ = s;
    ln_mag_ = hi + diff;
    return *this;
}

LogValue& LogValue::operator-=(const LogValue& o) { return *this += -o; }

LogValue& LogValue::operator*=(const LogValue& o) {
    if (sign_ == 0 || o.sign_ == 0) return *this = LogValue{};
    sign_ *= o.sign_;
    ln_mag_ += o.ln_mag_;
    return *this;
}

LogValue& LogValue::operator/=(const LogValue& o) {
    if (o.sign_ == 0) throw std::domain_error("LogValue: division by zero");
    if (sign_ == 0) return *this;
    sign_ *= o.sign_;
    ln_mag_ -= o.ln_mag_;
    return *this;
}

bool operator==(const LogValue& a, const LogValue& b) {
    if (a.sign_ != b.sign_) return false;
    return a.sign_ == 0 || a.ln_mag_ == b.ln_mag_;
}

std::partial_ordering operator<=>(const LogValue& a, const LogValue& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    if (a.sign_ == 0) return std::partial_ordering::equivalent;
    if (a.sign_ > 0) return a.ln_mag_ <=> b.ln_mag_;
    return b.ln_mag_ <=> a.ln_mag_;
}

std::string LogValue::str() const {
    std::ostringstream os;
    os.precision(17);
    if (sign_ == 0) return "0";
    os << (sign_ < 0 ? "-" : "") << "exp(" << ln_mag_ << ")";
    return os.str();
}

}  // namespace slowhom
