#include "glpp/svg.hpp"

#include <sstream>

namespace glpp {

SvgCanvas::SvgCanvas(int width, int height, double x_max, double y_max)
    : w_(width), h_(height), xm_(x_max), ym_(y_max) {}

double SvgCanvas::px(double x) const { return 40.0 + x / xm_ * (w_ - 60.0); }
double SvgCanvas::py(double y) const { return h_ - 40.0 - y / ym_ * (h_ - 60.0); }

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& color, double stroke) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke
       << "\" points=\"";
    for (auto& [x, y] : pts) os << px(x) << "," << py(y) << " ";
    os << "\"/>\n";
    body_ += os.str();
}

void SvgCanvas::axes() {
    std::ostringstream os;
    os << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(xm_)
       << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0)
       << "\" y2=\"" << py(ym_) << "\" stroke=\"black\"/>\n";
    body_ += os.str();
}

std::string SvgCanvas::finish() {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
       << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n<rect width=\"100%\" "
       << "height=\"100%\" fill=\"white\"/>\n"
       << body_ << "</svg>\n";
    return os.str();
}

}  // namespace glpp
