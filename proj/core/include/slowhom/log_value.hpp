#pragma once

#include <compare>
#include <string>

namespace slowhom {

// Real number stored as sign and natural log of magnitude.
class LogValue {
public:
    LogValue() = default;

    static LogValue zero() { return {}; }
    static LogValue one() { return from_ln(0.0); }
    static LogValue from_ln(double ln_mag, int sign = 1);
    static LogValue from_double(double x);

    int sign() const { return sign_; }
    double ln() const { return ln_mag_; }
    bool is_zero() const { return sign_ == 0; }
    bool is_positive() const { return sign_ > 0; }

    double to_double() const;
    LogValue abs() const;
    LogValue pow(double p) const;

    LogValue operator-() const;
    LogValue& operator+=(const LogValue& o);
    LogValue& operator-=(const LogValue& o);
    LogValue& operator*=(const LogValue& o);
    LogValue& operator/=(const LogValue& o);

    friend LogValue operator+(LogValue a, const LogValue& b) { return a += b; }
    friend LogValue operator-(LogValue a, const LogValue& b) { return a -= b; }
    friend LogValue operator*(LogValue a, const LogValue& b) { return a *= b; }
    friend LogValue operator/(LogValue a, const LogValue& b) { return a /= b; }

    friend bool operator==(const LogValue& a, const LogValue& b);
    friend std::partial_ordering operator<=>(const LogValue& a, const LogValue& b);

    std::string str() const;

private:
    int sign_ = 0;
    double ln_mag_ = 0.0;
};

// ln(e^a + e^b) without overflow.
double log_add_exp(double a, double b);

}  // namespace slowhom
