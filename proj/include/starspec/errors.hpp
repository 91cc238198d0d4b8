#pragma once

#include <stdexcept>
#include <string>

namespace starspec {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArmCount : public Error {
  public:
    using Error::Error;
};

class NotBound : public Error {
  public:
    using Error::Error;
};

class NotNormalizable : public Error {
  public:
    using Error::Error;
};

class ShapeError : public Error {
  public:
    using Error::Error;
};

class OutOfBounds : public Error {
  public:
    using Error::Error;
};

class BadMatrix : public Error {
  public:
    using Error::Error;
};

class Disconnected : public Error {
  public:
    using Error::Error;
};

class GeometryOverlap : public Error {
  public:
    using Error::Error;
};

class TooLarge : public Error {
  public:
    using Error::Error;
};

class NeedVectors : public Error {
  public:
    using Error::Error;
};

class FitDomainError : public Error {
  public:
    using Error::Error;
};

class NoConvergence : public Error {
  public:
    NoConvergence(const std::string& msg, double residual)
        : Error(msg), best_residual(residual) {}
    double best_residual;
};

class StateNotTracked : public Error {
  public:
    StateNotTracked(const std::string& msg, int at_size) : Error(msg), size(at_size) {}
    int size;
};

}  // namespace starspec
