#include "lspde/errors.hpp"

#include "lspde/text.hpp"

namespace lspde {

namespace {

std::string join(const std::vector<double>& xs)
{
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += format_real(xs[i]);
    }
    return s + ")";
}

}  // namespace

ZeroOnAxis::ZeroOnAxis(std::vector<double> xi, double modulus)
    : DomainError("symbol vanishes near xi = " + join(xi) + " (|p| = " + format_real(modulus) + ")"),
      xi_(std::move(xi)),
      modulus_(modulus)
{
}

NotAContraction::NotAContraction(double ratio)
    : DomainError("certified Lipschitz ratio " + format_real(ratio) + " is not below 1"), ratio_(ratio)
{
}

MaxIterExceeded::MaxIterExceeded(int iterations, double last_increment, double observed_ratio)
    : DomainError("Picard iteration did not converge after " + std::to_string(iterations) +
                  " steps (last increment " + format_real(last_increment) + ", observed ratio " +
                  format_real(observed_ratio) + ")"),
      iterations_(iterations),
      last_increment_(last_increment),
      observed_ratio_(observed_ratio)
{
}

ContractionViolated::ContractionViolated(int iteration, double observed, double certified)
    : DomainError("increment ratio " + format_real(observed) + " at step " + std::to_string(iteration) +
                  " exceeds certified " + format_real(certified)),
      iteration_(iteration),
      observed_(observed)
{
}

}  // namespace lspde
