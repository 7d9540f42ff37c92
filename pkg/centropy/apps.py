from django.apps import AppConfig


class CentropyConfig(AppConfig):
  name = "centropy"
  verbose_name = "Optimal causation entropy"
