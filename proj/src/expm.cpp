#include <cmath>

#include "kahlerflow/tstark.hpp"

namespace kahlerflow {

// Pade(13) with scaling and squaring; theta_13 from the standard backward
// error analysis of the degree-13 approximant.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
    static const double theta13 = 5.371920351148152;

    Eigen::Index n = a.rows();
    if (a.cols() != n) throw Error("expm: matrix must be square");
    double norm1 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) norm1 = std::max(norm1, a.col(j).cwiseAbs().sum());
    int squarings = 0;
    if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    Eigen::MatrixXcd s = a / std::pow(2.0, squarings);

    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd s2 = s * s;
    Eigen::MatrixXcd s4 = s2 * s2;
    Eigen::MatrixXcd s6 = s4 * s2;
    Eigen::MatrixXcd u =
        s * (s6 * (b[13] * s6 + b[11] * s4 + b[9] * s2) + b[7] * s6 + b[5] * s4 + b[3] * s2 +
             b[1] * id);
    Eigen::MatrixXcd v =
        s6 * (b[12] * s6 + b[10] * s4 + b[8] * s2) + b[6] * s6 + b[4] * s4 + b[2] * s2 + b[0] * id;
    Eigen::MatrixXcd r = (v - u).fullPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

}  // namespace kahlerflow
