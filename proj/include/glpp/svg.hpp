#ifndef GLPP_SVG_HPP
#define GLPP_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace glpp {

// minimal SVG writer: polyline plots with optional reference curve, used for
// quarter-plane shape profiles
class SvgCanvas {
public:
    SvgCanvas(int width, int height, double x_max, double y_max);
    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double stroke = 1.5);
    void axes();
    std::string finish();

private:
    int w_, h_;
    double xm_, ym_;
    std::string body_;
    double px(double x) const;
    double py(double y) const;
};

}  // namespace glpp

#endif
