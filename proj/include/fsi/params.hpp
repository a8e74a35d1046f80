#pragma once

#include "fsi/types.hpp"

namespace fsi {

/// Material constants of the fluid (rho1, c) and the solid (rho2, lambda, mu).
struct PhysicalParams {
    double rho1 = 1.0;
    double rho2 = 1.0;
    double c = 1.0;
    double lambda = 1.0;
    double mu = 1.0;

    void validate() const {
        if (!(rho1 > 0.0) || !(rho2 > 0.0) || !(c > 0.0))
            throw Error("PhysicalParams: densities and sound speed must be positive");
        if (!(mu > 0.0) || !(3.0 * lambda + 2.0 * mu > 0.0))
            throw Error("PhysicalParams: need mu > 0 and 3*lambda + 2*mu > 0");
    }
};

/// Interior penalty stabilization alpha / |e|^beta.
struct PenaltyParams {
    double alpha = 100.0;
    double beta = 1.0;

    void validate() const {
        if (!(alpha > 0.0)) throw Error("PenaltyParams: alpha must be positive");
        if (!(beta >= 1.0)) throw Error("PenaltyParams: beta must be >= 1");
    }
};

}  // namespace fsi
