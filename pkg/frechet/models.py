from django.db import models
from django.core.validators import MinValueValidator


# ----------------------
# SWEEP RESULTS
# ----------------------

class SweepRecord(models.Model):
    """Vertex count of F_4(p) at p = s/t, one row per grid point."""
    s = models.PositiveIntegerField(validators=[MinValueValidator(1)])
    t = models.PositiveIntegerField(validators=[MinValueValidator(1)])
    p = models.CharField(max_length=32, help_text="Canonical 'num/den' value of s/t")
    d = models.PositiveSmallIntegerField(default=4)
    vertex_count = models.PositiveIntegerField(validators=[MinValueValidator(1)])
    elapsed_ms = models.PositiveIntegerField(default=0)
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['d', 't', 's']
        constraints = [
            models.UniqueConstraint(fields=['d', 's', 't'], name='unique_sweep_point'),
        ]

    def __str__(self):
        return f"F_{self.d}({self.p}): {self.vertex_count} vertices"
