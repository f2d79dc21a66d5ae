#include "histofeat/error.hpp"

namespace histofeat {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "I/O";
    case ErrorKind::Format: return "format";
    case ErrorKind::Layout: return "layout";
    case ErrorKind::EmptyClass: return "empty-class";
    case ErrorKind::Stratification: return "stratification";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::DegenerateImage: return "degenerate-image";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::Bank: return "bank";
    case ErrorKind::Training: return "training";
  }
  return "unknown";
}

}  // namespace histofeat
