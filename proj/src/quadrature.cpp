#include "fsi/quadrature.hpp"

#include <cmath>

namespace fsi {

namespace {

void add_centroid(QuadratureRule& q, double w) {
    q.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    q.weights.push_back(w);
}

// Three points with barycentric coordinates (a, a, 1-2a) and cyclic
// permutations, expressed in reference coordinates (lambda1, lambda2).
void add_sym3(QuadratureRule& q, double a, double w) {
    const double c = 1.0 - 2.0 * a;
    q.points.emplace_back(a, c);
    q.weights.push_back(w);
    q.points.emplace_back(c, a);
    q.weights.push_back(w);
    q.points.emplace_back(a, a);
    q.weights.push_back(w);
}

// Six points: all permutations of barycentric (a, b, 1-a-b).
void add_sym6(QuadratureRule& q, double a, double b, double w) {
    const double c = 1.0 - a - b;
    const double xs[6] = {b, c, a, c, a, b};
    const double ys[6] = {c, b, c, a, b, a};
    for (int i = 0; i < 6; ++i) {
        q.points.emplace_back(xs[i], ys[i]);
        q.weights.push_back(w);
    }
}

void normalize(QuadratureRule& q, double target) {
    double s = 0.0;
    for (double w : q.weights) s += w;
    const double f = target / s;
    for (double& w : q.weights) w *= f;
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
    // Dunavant symmetric rules; published weights are relative to area 1.
    QuadratureRule q;
    if (degree <= 1) {
        q.exactness = 1;
        add_centroid(q, 1.0);
    } else if (degree == 2) {
        q.exactness = 2;
        add_sym3(q, 1.0 / 6.0, 1.0 / 3.0);
    } else if (degree <= 4) {
        q.exactness = 4;
        add_sym3(q, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
        add_sym3(q, 0.09157621350977074345957146340220, 0.10995174365532186763832632490021);
    } else if (degree <= 6) {
        q.exactness = 6;
        add_sym3(q, 0.24928674517091042129163855310702, 0.11678627572637936602528961138558);
        add_sym3(q, 0.06308901449150222834033160287082, 0.05084490637020681692093680910686);
        add_sym6(q, 0.31035245103378440541660773395655, 0.63650249912139864723014259441205,
                 0.08285107561837357519355345642044);
    } else if (degree <= 8) {
        q.exactness = 8;
        add_centroid(q, 0.14431560767778716825109111048906);
        add_sym3(q, 0.17056930775176020662229350149146, 0.10321737053471825028179155029212);
        add_sym3(q, 0.05054722831703097545842355059660, 0.03245849762319808031092592834178);
        add_sym3(q, 0.45929258829272315602881551449417, 0.09509163426728462479389610438858);
        add_sym6(q, 0.26311282963463811342178578628464, 0.72849239295540428124100037917606,
                 0.02723031417443499426484469007390);
    } else if (degree <= 10) {
        q.exactness = 10;
        add_centroid(q, 0.090817990382754);
        add_sym3(q, 0.485577633383657, 0.036725957756467);
        add_sym3(q, 0.109481575485037, 0.045321059435528);
        add_sym6(q, 0.141707219414880, 0.307939838764121, 0.072757916845420);
        add_sym6(q, 0.025003534762686, 0.246672560639903, 0.028327242531057);
        add_sym6(q, 0.009540815400299, 0.066803251012200, 0.009421666963733);
    } else {
        throw Error("triangle_rule: degree > 10 not supported");
    }
    normalize(q, 0.5);
    return q;
}

QuadratureRule edge_rule(int npoints) {
    // Gauss-Legendre nodes on [-1,1], mapped to [0,1].
    std::vector<double> t, w;
    switch (npoints) {
        case 1:
            t = {0.0};
            w = {2.0};
            break;
        case 2:
            t = {-0.57735026918962576451, 0.57735026918962576451};
            w = {1.0, 1.0};
            break;
        case 3:
            t = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        case 4:
            t = {-0.86113631159405257522, -0.33998104358485626480, 0.33998104358485626480,
                 0.86113631159405257522};
            w = {0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
                 0.34785484513745385737};
            break;
        case 5:
            t = {-0.90617984593866399280, -0.53846931010568309104, 0.0, 0.53846931010568309104,
                 0.90617984593866399280};
            w = {0.23692688505618908751, 0.47862867049936646804, 0.56888888888888888889,
                 0.47862867049936646804, 0.23692688505618908751};
            break;
        case 6:
            t = {-0.93246951420315202781, -0.66120938646626451366, -0.23861918608319690863,
                 0.23861918608319690863, 0.66120938646626451366, 0.93246951420315202781};
            w = {0.17132449237917034504, 0.36076157304813860757, 0.46791393457269104739,
                 0.46791393457269104739, 0.36076157304813860757, 0.17132449237917034504};
            break;
        default:
            throw Error("edge_rule: unsupported point count");
    }
    QuadratureRule q;
    q.exactness = 2 * npoints - 1;
    for (int i = 0; i < npoints; ++i) {
        q.points.emplace_back(0.5 * (1.0 + t[i]), 0.0);
        q.weights.push_back(0.5 * w[i]);
    }
    normalize(q, 1.0);
    return q;
}

}  // namespace fsi
