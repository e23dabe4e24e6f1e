#include "qp/jacobi.hpp"

// explicit instantiations for the exact coefficient kinds
template class qp::JacobiTruncation<qp::Rat>;
template class qp::JacobiTruncation<qp::GaussRat>;
template qp::QuasiHomogeneityReport qp::quasi_homogeneous_test<qp::Rat>(const qp::JacobiTruncation<qp::Rat>&);
template qp::TangentSolveResult<qp::Rat> qp::tangent_solve<qp::Rat>(const qp::CyclicPotential<qp::Rat>&,
                                                                    const qp::CyclicPotential<qp::Rat>&);
