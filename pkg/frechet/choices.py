from django.db import models


class Provenance(models.TextChoices):
    KERNEL = "kernel", "Kernel of H"
    TYPE0_PLUS = "type0-plus", "Type-0 pmf of F+"
    TYPE0_MINUS = "type0-minus", "Type-0 pmf of F-"
    SUPPORT_X1X2 = "supportX1X2", "Sum supported on {1, 2}"
    UPPER_FRECHET = "upperFrechet", "Upper Frechet bound"
    ORACLE = "oracle", "Vertex enumeration"


class DependenceClass(models.TextChoices):
    PPC = "P-PC", "Pairwise positively correlated"
    PNC = "P-NC", "Pairwise negatively correlated"
    MIXED = "mixed", "Mixed"


class Modularity(models.TextChoices):
    SUPERMODULAR = "supermodular", "Supermodular"
    SUBMODULAR = "submodular", "Submodular"
    MODULAR = "modular", "Modular"
    NEITHER = "neither", "Neither"


class OutputFormat(models.TextChoices):
    TABLE = "table", "Table"
    JSON = "json", "JSON"
    CSV = "csv", "CSV"
