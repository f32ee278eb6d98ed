"""Tour of the box geometry layer: barriers, neighborhoods, stationarity."""

import numpy as np

from sipm import (Bounds, barrier_gradient, barrier_value, in_neighborhood,
                  kkt_certificate, project_to_neighborhood,
                  projected_gradient_norm, range_gap, shifted_barrier_value)

print("== boxes with extended-real sides ==")
bounds = Bounds(np.array([0.0, -np.inf]), np.array([2.0, 5.0]))
print("lower:", bounds.lower, " upper:", bounds.upper)
print("finite lower sides:", bounds.finite_lower, " finite upper sides:", bounds.finite_upper)
print("range gap (capped at 100):", range_gap(bounds, 100.0))

print("\n== log-barrier values and gradients ==")
x = np.array([0.5, 1.0])
mu = 0.1
print("barrier value at", x, "with mu", mu, "->", barrier_value(0.0, x, bounds, mu))
print("shifted value (chi=3):", shifted_barrier_value(0.0, x, bounds, mu, 3.0))
print("barrier gradient of f=0:", barrier_gradient(np.zeros(2), x, bounds, mu))

print("\n== inner neighborhoods ==")
theta = 0.25
print(f"is {x} inside the theta={theta} neighborhood?",
      in_neighborhood(x, bounds, theta))
outside = np.array([-1.0, 9.0])
print("projecting", outside, "->", project_to_neighborhood(outside, bounds, theta))

print("\n== stationarity measures ==")
box = Bounds.cube(2, -1.0, 1.0)
xstar = np.array([1.0, -0.25])          # upper bound active in coordinate 0
grad = np.array([-0.3, 0.0])            # pushes outward there, zero elsewhere
print("projected-gradient norm at a KKT point:",
      projected_gradient_norm(xstar, grad, box))
cert = kkt_certificate(np.array([0.5, -0.25]), grad, box, mu=0.01)
print("multipliers y:", cert.y, " z:", cert.z)
print("stationarity residual:", cert.stationarity_residual,
      " complementarity:", cert.complementarity_residual)
